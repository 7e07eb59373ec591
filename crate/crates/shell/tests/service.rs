use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use staircase_core::staircase::{inner_corners, main_beta};
use staircase_core::QuadNum;
use staircase_shell::cli::run;
use staircase_shell::http::router;
use staircase_shell::service::{BoundsRequest, CreateRequest, MutateRequest, ReplayRequest, ServiceError, SessionService};
use tower::ServiceExt;

fn q(v: &Value) -> QuadNum {
    serde_json::from_value(v.clone()).unwrap()
}

fn int(n: i64) -> QuadNum {
    QuadNum::from(n)
}

async fn fresh(s: &SessionService) -> String {
    let v = s.create_session(CreateRequest { beta: None, preset: None }).await.unwrap();
    v["id"].as_str().unwrap().to_string()
}

async fn click(s: &SessionService, id: &str, letters: &str) -> Value {
    let mut last = Value::Null;
    for c in letters.chars() {
        last = s.mutate(id, MutateRequest { vertex: c.to_string() }).await.unwrap();
    }
    last
}

#[tokio::test]
async fn clicks_reach_the_first_staircase_polygon() {
    let s = SessionService::new(20);
    let id = fresh(&s).await;
    click(&s, &id, "vvyx").await;
    let v = s.get_polygon(&id).await.unwrap();
    assert_eq!(v["word"], "v2yx");
    let b = main_beta();
    let l = &v["lengths"]["exact"];
    assert_eq!(q(&l["oy"]), &b + &int(3));
    assert_eq!(q(&l["yv"]), &(&int(7) + &(&b * &int(4))) / &int(19));
    assert_eq!(q(&l["xv"]), &(&int(3) - &b) / &int(95));
    assert_eq!(q(&l["ox"]), &(&(&b * &int(4)) - &int(7)) / &int(5));
}

#[tokio::test]
async fn undo_restores_snapshot() {
    let s = SessionService::new(20);
    let id = fresh(&s).await;
    click(&s, &id, "vv").await;
    let before = s.get_polygon(&id).await.unwrap();
    click(&s, &id, "y").await;
    let after_undo = s.undo(&id).await.unwrap();
    assert_eq!(before, after_undo);
    s.undo(&id).await.unwrap();
    s.undo(&id).await.unwrap();
    let e = s.undo(&id).await.unwrap_err();
    assert_eq!(e.status(), 409);
}

#[tokio::test]
async fn embedding_after_word_is_first_inner_corner() {
    let s = SessionService::new(20);
    let id = fresh(&s).await;
    s.replay(&id, ReplayRequest { word: "v2yxy0xy".into() }).await.unwrap();
    let e = s.get_embedding(&id).await.unwrap();
    let (i1, _) = inner_corners(0, &main_beta()).unwrap();
    assert_eq!(q(&e["sample"]["z"]), i1.z);
    assert_eq!(q(&e["sample"]["lambda"]), i1.lambda);
    let b = main_beta();
    let z = &(&int(7) * &(&int(239) + &(&int(86) * &b))) / &(&int(71) * &(&int(3) + &b));
    assert_eq!(i1.z, z);
}

#[tokio::test]
async fn replay_matches_clicks_and_cli() {
    let s = SessionService::new(40);
    let a = fresh(&s).await;
    let clicked = click(&s, &a, "vvyxyyyxy").await;
    let b = fresh(&s).await;
    let replayed = s.replay(&b, ReplayRequest { word: "v2yxy3xy".into() }).await.unwrap();
    assert_eq!(clicked, replayed);

    let mut out = Vec::new();
    let code = run(["staircase", "mutate", "--word", "v2yxy3xy"], &mut out, &mut Vec::new());
    assert_eq!(code, 0);
    let cli: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(cli, replayed);
}

#[tokio::test]
async fn failed_replay_leaves_session_alone() {
    let s = SessionService::new(20);
    let id = s.create_session(CreateRequest { beta: Some(json!("1")), preset: None }).await.unwrap();
    let id = id["id"].as_str().unwrap();
    let before = s.get_polygon(id).await.unwrap();
    let e = s.replay(id, ReplayRequest { word: "x".into() }).await.unwrap_err();
    assert_eq!(e.status(), 409);
    assert_eq!(e.body()["error"], "AmbiguousHit");
    assert_eq!(s.get_polygon(id).await.unwrap(), before);
    let e = s.replay(id, ReplayRequest { word: "q".into() }).await.unwrap_err();
    assert_eq!(e.status(), 400);
}

#[tokio::test]
async fn errors_map_to_status() {
    let s = SessionService::new(20);
    assert!(matches!(s.get_polygon("nope").await, Err(ServiceError::NotFound(_))));
    let id = fresh(&s).await;
    let e = s.mutate(&id, MutateRequest { vertex: "o".into() }).await.unwrap_err();
    assert_eq!(e.status(), 400);
    let e = s.get_bounds(&id, BoundsRequest { k: Some(0), ..Default::default() }).await.unwrap_err();
    assert_eq!(e.status(), 400);
    let e = s
        .create_session(CreateRequest { beta: Some(json!("2")), preset: Some("main".into()) })
        .await
        .unwrap_err();
    assert_eq!(e.status(), 400);
}

#[tokio::test]
async fn bounds_for_chart() {
    let s = SessionService::new(12);
    let id = fresh(&s).await;
    click(&s, &id, "vvyx").await;
    let req = BoundsRequest { k: Some(200), lo: Some("6".into()), hi: Some("9".into()), samples: Some(7) };
    let v = s.get_bounds(&id, req).await.unwrap();
    assert_eq!(v["sweep"].as_array().unwrap().len(), 7);
    assert_eq!(v["volume"].as_array().unwrap().len(), 7);
    assert_eq!(v["envelope"]["type"], "samples");
    // z = 7 is the third grid point; the lower bound there is 7/(3+beta).
    let at7 = &v["sweep"][2];
    assert_eq!(q(&at7["z"]), int(7));
    assert_eq!(q(&at7["lambda"]), &int(7) / &(&int(3) + &main_beta()));
    // Markers: the embeddings extracted along the history.
    let marks = v["embeddings"].as_array().unwrap();
    assert!(!marks.is_empty());
    assert_eq!(marks.last().unwrap()["sample"]["kind"]["word"], "v2yx");
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json").body(Body::from(body.to_string())).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = serde_json::from_slice(&bytes).unwrap_or(Value::String(String::from_utf8_lossy(&bytes).into()));
    (status, v)
}

#[tokio::test]
async fn http_round_trip() {
    let app = router(Arc::new(SessionService::new(20)));
    let (st, v) = call(&app, "POST", "/sessions", r#"{"preset":"main"}"#).await;
    assert_eq!(st, StatusCode::CREATED);
    let id = v["id"].as_str().unwrap().to_string();
    for c in ["v", "v", "y", "x"] {
        let (st, _) = call(&app, "POST", &format!("/sessions/{id}/mutate"), &format!(r#"{{"vertex":"{c}"}}"#)).await;
        assert_eq!(st, StatusCode::OK);
    }
    let (st, v) = call(&app, "GET", &format!("/sessions/{id}/polygon"), "").await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["word"], "v2yx");
    let (st, v) = call(&app, "GET", &format!("/sessions/{id}/embedding"), "").await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["sample"]["kind"]["type"], "embedding");
    let (st, v) = call(&app, "GET", &format!("/sessions/{id}/svg"), "").await;
    assert_eq!(st, StatusCode::OK);
    assert!(v.as_str().unwrap().starts_with("<svg"));
    let (st, _) = call(&app, "POST", &format!("/sessions/{id}/undo"), "").await;
    assert_eq!(st, StatusCode::OK);
    let (st, v) = call(&app, "POST", &format!("/sessions/{id}/replay"), r#"{"word":"v2yxy0xy"}"#).await;
    assert_eq!(st, StatusCode::OK);
    assert_eq!(v["word"], "v2yx2y");
    let (st, v) = call(&app, "GET", &format!("/sessions/{id}/bounds?k=100&lo=1&hi=9&samples=5"), "").await;
    assert_eq!(st, StatusCode::OK, "{v}");
    assert_eq!(v["sweep"].as_array().unwrap().len(), 5);
}

#[tokio::test]
async fn http_errors() {
    let app = router(Arc::new(SessionService::new(20)));
    let (st, v) = call(&app, "GET", "/sessions/missing/polygon", "").await;
    assert_eq!(st, StatusCode::NOT_FOUND);
    assert_eq!(v["error"], "UnknownSession");
    let (st, _) = call(&app, "POST", "/sessions", "{not json").await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let (_, v) = call(&app, "POST", "/sessions", r#"{"beta":"1"}"#).await;
    let id = v["id"].as_str().unwrap().to_string();
    let (st, v) = call(&app, "POST", &format!("/sessions/{id}/mutate"), r#"{"vertex":"x"}"#).await;
    assert_eq!(st, StatusCode::CONFLICT);
    assert_eq!(v["error"], "AmbiguousHit");
    let (st, _) = call(&app, "POST", &format!("/sessions/{id}/mutate"), r#"{"label":"x"}"#).await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let (st, _) = call(&app, "GET", &format!("/sessions/{id}/bounds?k=abc"), "").await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
    let (st, _) = call(&app, "GET", &format!("/sessions/{id}/bounds?lo=5&hi=2"), "").await;
    assert_eq!(st, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn concurrent_clicks_serialize() {
    let s = Arc::new(SessionService::new(20));
    let id = fresh(&s).await;
    click(&s, &id, "vv").await;
    let mut tasks = Vec::new();
    for _ in 0..4 {
        let (s, id) = (s.clone(), id.clone());
        tasks.push(tokio::spawn(async move { s.mutate(&id, MutateRequest { vertex: "y".into() }).await }));
    }
    for t in tasks {
        t.await.unwrap().unwrap();
    }
    let v = s.get_polygon(&id).await.unwrap();
    assert_eq!(v["word"], "v2y4");
}
