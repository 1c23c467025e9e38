use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use tricross_cli::api::{router, AppState};

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

fn secure_game() -> Value {
    json!({"board": "tri:7x4", "maker": "strategy", "breaker": "human", "seed": 5})
}

#[tokio::test]
async fn secure_game_answers_each_red_edge() {
    let app = router(AppState::new(None, 0));
    let (status, game) = call(&app, "POST", "/games", Some(secure_game())).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(game["human_to_move"], "Vertical");
    let id = game["id"].as_u64().unwrap();
    let mut state = game;
    for _ in 0..10 {
        let edge = state["legal_moves"][0].clone();
        let (status, body) = call(
            &app,
            "POST",
            &format!("/games/{id}/moves"),
            Some(json!({"player": "Vertical", "edges": [edge]})),
        )
        .await;
        assert_eq!(status, StatusCode::OK, "{body}");
        let reply = &body["replies"][0];
        assert_eq!(reply["player"], "Horizontal");
        assert_eq!(reply["case_tags"].as_array().unwrap().len(), 1);
        assert!(reply["certificates"].is_object());
        state = body["game"].clone();
    }
    let (_, fetched) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(fetched, state);
    let (_, again) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(again, fetched);
}

#[tokio::test]
async fn errors_map_to_statuses() {
    let app = router(AppState::new(None, 0));
    let (status, _) = call(&app, "GET", "/games/99", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (_, game) = call(&app, "POST", "/games", Some(secure_game())).await;
    let id = game["id"].as_u64().unwrap();
    let edge = game["legal_moves"][0].clone();
    let (status, body) =
        call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"player": "Horizontal", "edges": [edge]}))).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");

    let (status, body) =
        call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"player": "Vertical", "edges": [edge]}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    // Red may not claim its own edge again.
    let (status, body) =
        call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"player": "Vertical", "edges": [edge]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["detail"].as_str().unwrap().contains("OccupiedEdge"), "{body}");

    let (status, _) =
        call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"player": "Vertical", "edges": [[999, 999]]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn hint_on_a_tiny_board_is_exact() {
    let app = router(AppState::new(None, 0));
    let (status, game) = call(
        &app,
        "POST",
        "/games",
        Some(json!({"board": "tri:4x3", "p": 1, "q": 1, "maker": "human", "breaker": "greedy"})),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{game}");
    let id = game["id"].as_u64().unwrap();
    let (status, hint) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["solver"]["winner"], "Maker");
    assert!(hint["min_completion_cost"].as_u64().is_some());

    let (_, big) = call(
        &app,
        "POST",
        "/games",
        Some(json!({"board": "tri:8x3", "p": 1, "q": 1, "maker": "human", "breaker": "greedy"})),
    )
    .await;
    let big = big["id"].as_u64().unwrap();
    let (_, hint) = call(&app, "GET", &format!("/games/{big}/hint"), None).await;
    assert!(hint["solver"].is_null());
    assert!(hint["solver_note"].as_str().unwrap().contains("cap"));
}

#[tokio::test]
async fn record_and_journal_restore_the_game() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(AppState::new(Some(dir.path().to_path_buf()), 0));
    let (_, game) = call(
        &app,
        "POST",
        "/games",
        Some(json!({"board": "tri:6x3", "p": 1, "q": 1, "maker": "strategy", "breaker": "human", "seed": 3})),
    )
    .await;
    let id = game["id"].as_u64().unwrap();
    let mut state = game;
    for _ in 0..3 {
        let edge = state["legal_moves"][0].clone();
        let (status, body) =
            call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"player": "Breaker", "edges": [edge]}))).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        state = body["game"].clone();
    }
    let (_, record) = call(&app, "GET", &format!("/games/{id}/record"), None).await;
    assert_eq!(record["moves"].as_array().unwrap().len(), 7);

    let fresh = AppState::new(Some(dir.path().to_path_buf()), 0);
    assert_eq!(fresh.restore_journal().unwrap(), 1);
    let app2 = router(fresh);
    let (_, restored) = call(&app2, "GET", &format!("/games/{id}/record"), None).await;
    assert_eq!(restored, record);
}
