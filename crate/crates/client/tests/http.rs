//! The service over real HTTP, through the client.

use std::net::SocketAddr;

use skat_api::*;
use skat_client::{Client, ClientError};
use skat_core::cards::{CardSet, GameType, Position};
use skat_core::harness::bench::{BenchConfig, Playout};
use skat_core::harness::corpus::{generate, CorpusConfig};
use skat_core::harness::record::write_records;
use skat_core::harness::replay::ReplayPolicy;
use skat_core::skatselect::{Engine, Policy};
use skat_service::{spawn, AppState};

async fn start() -> Client {
    let addr = spawn(SocketAddr::from(([127, 0, 0, 1], 0)), AppState::new(Engine::default()))
        .await
        .unwrap();
    Client::new(format!("http://{addr}"))
}

fn codes(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn advise_req(hand: &str) -> AdviseRequest {
    AdviseRequest {
        hand: codes(hand),
        skat: None,
        position: "fore".into(),
        bid: 18,
        game: None,
    }
}

const HAND: &str = "CJ SJ HJ CA CT CK SA ST HA H7 D8 D7";

fn status(e: ClientError) -> u16 {
    match e {
        ClientError::Status { status, .. } => status,
        other => panic!("expected a status, got {other}"),
    }
}

#[tokio::test]
async fn advise_ranks_every_game() {
    let c = start().await;
    c.health().await.unwrap();
    let r = c.advise(&advise_req(HAND)).await.unwrap();
    assert_eq!(r.games.len(), 6);
    for g in &r.games {
        assert_eq!(g.candidates.len(), 66);
        if !g.game.is_null() {
            assert!(g.candidates[0].filtered_by.is_none(), "{}: best put was filtered", g.game);
        }
    }
    assert!(r.games.iter().any(|g| g.game == GameType::Grand));
}

#[tokio::test]
async fn advise_accepts_ten_plus_skat_and_a_fixed_game() {
    let c = start().await;
    let mut req = advise_req("CJ SJ HJ CA CT CK SA ST HA H7");
    req.skat = Some(codes("D8 D7"));
    req.game = Some("grand".into());
    let r = c.advise(&req).await.unwrap();
    assert_eq!(r.games.len(), 1);
    assert_eq!(r.games[0].game, GameType::Grand);
}

#[tokio::test]
async fn malformed_hands_are_400() {
    let c = start().await;
    let eleven = "CJ SJ HJ CA CT CK SA ST HA H7 D8";
    assert_eq!(status(c.advise(&advise_req(eleven)).await.unwrap_err()), 400);
    let dup = "CJ CJ HJ CA CT CK SA ST HA H7 D8 D7";
    assert_eq!(status(c.advise(&advise_req(dup)).await.unwrap_err()), 400);
    let bad = "CJ XX HJ CA CT CK SA ST HA H7 D8 D7";
    assert_eq!(status(c.advise(&advise_req(bad)).await.unwrap_err()), 400);
    let mut split = advise_req(eleven);
    split.skat = Some(codes("D7"));
    assert_eq!(status(c.advise(&split).await.unwrap_err()), 400);

    let raw = reqwest::Client::new()
        .post(format!("{}{ADVISE_PATH}", c.base()))
        .header("content-type", "application/json")
        .body("{\"hand\": [")
        .send()
        .await
        .unwrap();
    assert_eq!(raw.status().as_u16(), 400);
}

#[tokio::test]
async fn illegal_context_is_422() {
    let c = start().await;
    let mut req = advise_req(HAND);
    req.position = "north".into();
    assert_eq!(status(c.advise(&req).await.unwrap_err()), 422);
    let mut req = advise_req(HAND);
    req.bid = 19;
    assert_eq!(status(c.advise(&req).await.unwrap_err()), 422);
    // with three jacks diamonds is worth 36
    let mut req = advise_req(HAND);
    req.bid = 40;
    req.game = Some("diamonds".into());
    assert_eq!(status(c.advise(&req).await.unwrap_err()), 422);
}

#[tokio::test]
async fn deals_select_and_solve() {
    let c = start().await;
    let d = c.deal(&DealRequest { seed: None, index: Some(0), count: 2 }).await.unwrap();
    assert_eq!(d.deals.len(), 2);
    assert_eq!(d.deals[1].number, 1);
    assert!(c.deal(&DealRequest { seed: Some(1), index: Some(1), count: 1 }).await.is_err());

    let hand: CardSet = HAND.parse().unwrap();
    let s = c
        .select(&SelectRequest {
            hand,
            skat: None,
            game: GameType::Grand,
            position: Position::Forehand,
            bid: 18,
            policy: Policy::Proposal,
            seed: 0,
        })
        .await
        .unwrap();
    assert_eq!(s.candidates.len(), 66);
    assert_eq!(s.value, 96);

    let r = c
        .solve(&SolveRequest {
            hands: ["CJ SJ".parse().unwrap(), "HA HT".parse().unwrap(), "D7 D8".parse().unwrap()],
            skat: CardSet::EMPTY,
            game: GameType::Grand,
            declarer: Position::Forehand,
        })
        .await
        .unwrap();
    assert_eq!(r.value, 21 + 4);
    assert_eq!(r.principal_variation.len(), 6);
    let overlap = SolveRequest {
        hands: ["CJ SJ".parse().unwrap(), "CJ HT".parse().unwrap(), "D7 D8".parse().unwrap()],
        skat: CardSet::EMPTY,
        game: GameType::Grand,
        declarer: Position::Forehand,
    };
    assert_eq!(status(c.solve(&overlap).await.unwrap_err()), 400);
}

#[tokio::test]
async fn auction_bench_tables_and_replay() {
    let c = start().await;
    let a = c
        .auction(&AuctionRequest { deals: 3, seed: 1, loss_base: None, threshold: None })
        .await
        .unwrap();
    assert_eq!(a.declarations.len(), 3);
    assert_eq!(a.folds, a.declarations.iter().filter(|d| d.auction.folded).count() as u64);

    let b = c
        .bench(&BenchConfig {
            deals: 2,
            seed: 3,
            policies: vec![Policy::Proposal, Policy::Random],
            playout: Playout::Glassbox,
            mode: skat_core::harness::corpus::CorpusMode::Forced,
        })
        .await
        .unwrap();
    assert_eq!(b.results.len(), 2);
    assert_eq!(b.summaries.len(), 2);

    let dir = tempfile::tempdir().unwrap();
    let records = generate(&Engine::default(), &CorpusConfig { deals: 6, seed: 9, ..Default::default() });
    let path = dir.path().join("games.jsonl");
    write_records(&mut std::fs::File::create(&path).unwrap(), &records).unwrap();
    let from = path.to_string_lossy().into_owned();
    let out = dir.path().join("tables").to_string_lossy().into_owned();
    let built = c
        .table_build(&TableBuildRequest {
            from: Some(from.clone()),
            selfplay_deals: None,
            seed: 0,
            records_out: None,
            out,
            min_samples: None,
        })
        .await
        .unwrap();
    assert_eq!(built.used, 6);
    assert!(dir.path().join("tables").join("grand.tbl").exists());

    let tab = c.replay(&ReplayRequest { from: from.clone(), policy: ReplayPolicy::Recorded }).await.unwrap();
    assert_eq!(tab.games, 6);
    // self-play outcomes are open-card results, so passthrough reproduces them
    for r in [false, true] {
        for g in [false, true] {
            for p in [false, true] {
                if r != p {
                    assert_eq!(tab.cell(r, g, p), 0);
                }
            }
        }
    }
    let missing = ReplayRequest { from: "/nonexistent/games.jsonl".into(), policy: ReplayPolicy::Recorded };
    assert_eq!(status(c.replay(&missing).await.unwrap_err()), 400);
}
