//! HTTP API over a shared, immutable set of pipeline resources.

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use mal2sign_core::{translate, PipelineResources};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslateRequest {
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LexiconItem {
    pub gloss: String,
    pub roots: Vec<String>,
    pub duration: f64,
}

/// Parses a `POST /api/translate` body, which must be a JSON object.
pub fn parse_translate_request(body: &[u8]) -> Result<TranslateRequest, String> {
    let value: serde_json::Value = serde_json::from_slice(body).map_err(|e| e.to_string())?;
    if !value.is_object() {
        return Err("request body must be a JSON object".into());
    }
    serde_json::from_value(value).map_err(|e| e.to_string())
}

pub fn router(resources: Arc<PipelineResources>, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/translate", post(translate_handler))
        .route("/api/lexicon", get(lexicon_handler))
        .route("/api/health", get(health_handler))
        .with_state(resources);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder_index)),
    }
}

async fn translate_handler(State(res): State<Arc<PipelineResources>>, body: Bytes) -> Response {
    match parse_translate_request(&body) {
        Ok(req) => {
            let doc = translate(&req.text, &res).to_document();
            ([(header::CONTENT_TYPE, "application/json")], doc).into_response()
        }
        Err(msg) => (StatusCode::BAD_REQUEST, Json(json!({ "error": msg }))).into_response(),
    }
}

async fn lexicon_handler(State(res): State<Arc<PipelineResources>>) -> Json<Vec<LexiconItem>> {
    Json(
        res.lexicon
            .entries()
            .map(|e| LexiconItem {
                gloss: e.gloss.clone(),
                roots: e.roots.clone(),
                duration: e.duration(),
            })
            .collect(),
    )
}

async fn health_handler() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok", "version": VERSION }))
}

async fn placeholder_index() -> Html<&'static str> {
    Html(
        "<!doctype html><meta charset=utf-8><title>mal2sign</title>\
         <p>No viewer bundle configured. Start with <code>mal2sign serve --static DIR</code>, \
         or POST <code>{\"text\": \"...\"}</code> to <code>/api/translate</code>.</p>",
    )
}

pub async fn serve(
    resources: Arc<PipelineResources>,
    port: u16,
    static_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let app = router(resources, static_dir);
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("mal2sign listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
