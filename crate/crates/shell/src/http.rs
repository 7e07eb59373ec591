//! HTTP routes over [`SessionService`]. Every response body is JSON except
//! the SVG snapshot.

use std::collections::HashMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::service::{BoundsRequest, ServiceError, ServiceResult, SessionService};

type Shared = Arc<SessionService>;

pub fn router(service: Shared) -> Router {
    Router::new()
        .route("/health", get(|| async { Json(json!({"status": "ok"})) }))
        .route("/sessions", post(create))
        .route("/sessions/{id}/polygon", get(polygon))
        .route("/sessions/{id}/mutate", post(mutate))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/replay", post(replay))
        .route("/sessions/{id}/embedding", get(embedding))
        .route("/sessions/{id}/bounds", get(bounds))
        .route("/sessions/{id}/svg", get(svg))
        .with_state(service)
}

fn respond(r: ServiceResult, ok: StatusCode) -> Response {
    match r {
        Ok(v) => (ok, Json(v)).into_response(),
        Err(e) => error(e),
    }
}

fn error(e: ServiceError) -> Response {
    let status = StatusCode::from_u16(e.status()).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, Json(e.body())).into_response()
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| ServiceError::BadRequest(format!("malformed body: {e}")))
}

async fn create(State(s): State<Shared>, body: Bytes) -> Response {
    // An empty body means the default beta.
    let req = if body.iter().all(u8::is_ascii_whitespace) {
        Ok(crate::service::CreateRequest { beta: None, preset: None })
    } else {
        parse_body(&body)
    };
    match req {
        Ok(req) => respond(s.create_session(req).await, StatusCode::CREATED),
        Err(e) => error(e),
    }
}

async fn polygon(State(s): State<Shared>, Path(id): Path<String>) -> Response {
    respond(s.get_polygon(&id).await, StatusCode::OK)
}

async fn mutate(State(s): State<Shared>, Path(id): Path<String>, body: Bytes) -> Response {
    match parse_body(&body) {
        Ok(req) => respond(s.mutate(&id, req).await, StatusCode::OK),
        Err(e) => error(e),
    }
}

async fn undo(State(s): State<Shared>, Path(id): Path<String>) -> Response {
    respond(s.undo(&id).await, StatusCode::OK)
}

async fn replay(State(s): State<Shared>, Path(id): Path<String>, body: Bytes) -> Response {
    match parse_body(&body) {
        Ok(req) => respond(s.replay(&id, req).await, StatusCode::OK),
        Err(e) => error(e),
    }
}

async fn embedding(State(s): State<Shared>, Path(id): Path<String>) -> Response {
    respond(s.get_embedding(&id).await, StatusCode::OK)
}

fn bounds_request(q: &HashMap<String, String>) -> Result<BoundsRequest, ServiceError> {
    let mut req = BoundsRequest::default();
    for (key, v) in q {
        let bad = || ServiceError::BadRequest(format!("bad value for '{key}': '{v}'"));
        match key.as_str() {
            "k" => req.k = Some(v.parse().map_err(|_| bad())?),
            "samples" => req.samples = Some(v.parse().map_err(|_| bad())?),
            "lo" => req.lo = Some(v.clone()),
            "hi" => req.hi = Some(v.clone()),
            _ => return Err(ServiceError::BadRequest(format!("unknown parameter '{key}'"))),
        }
    }
    Ok(req)
}

async fn bounds(State(s): State<Shared>, Path(id): Path<String>, Query(q): Query<HashMap<String, String>>) -> Response {
    match bounds_request(&q) {
        Ok(req) => respond(s.get_bounds(&id, req).await, StatusCode::OK),
        Err(e) => error(e),
    }
}

async fn svg(State(s): State<Shared>, Path(id): Path<String>) -> Response {
    match s.get_svg(&id).await {
        Ok(svg) => ([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response(),
        Err(e) => error(e),
    }
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: &str, digits: usize) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(SessionService::new(digits)))).await
}
