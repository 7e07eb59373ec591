//! Session service behind the HTTP API. Each session holds the polygon
//! history of one exploration; writes to a session queue on a fair lock so
//! they apply one at a time in arrival order.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};
use staircase_core::atf::{apply_word, extract_embedding, init_polydisk, mutate, to_json, to_svg, AtfPolygon, Label};
use staircase_core::ech::{default_sweep_samples, lower_bound_sweep};
use staircase_core::perfclass::ech_index;
use staircase_core::staircase::{envelope, staircase_classes, BoundSample};
use staircase_core::{Error, QuadNum, Rounding};
use tokio::sync::{Mutex, RwLock};

use crate::inputs::parse_preset;

pub const MAX_BOUNDS_K: u64 = 20_000;
pub const MAX_BOUNDS_SAMPLES: usize = 2_000;

#[derive(Debug)]
pub enum ServiceError {
    NotFound(String),
    BadRequest(String),
    Engine(Error),
}

impl ServiceError {
    pub fn status(&self) -> u16 {
        match self {
            ServiceError::NotFound(_) => 404,
            ServiceError::BadRequest(_) => 400,
            ServiceError::Engine(_) => 409,
        }
    }

    pub fn body(&self) -> Value {
        match self {
            ServiceError::NotFound(id) => json!({"error": "UnknownSession", "message": format!("no session '{id}'")}),
            ServiceError::BadRequest(m) => json!({"error": "BadRequest", "message": m}),
            ServiceError::Engine(e) => json!({"error": e.code(), "message": e.to_string()}),
        }
    }
}

impl From<Error> for ServiceError {
    fn from(e: Error) -> Self {
        ServiceError::Engine(e)
    }
}

pub type ServiceResult = std::result::Result<Value, ServiceError>;

fn bad(e: impl ToString) -> ServiceError {
    ServiceError::BadRequest(e.to_string())
}

/// Embedding sample with decimal renderings.
pub fn sample_view(s: &BoundSample, digits: usize) -> Value {
    json!({
        "sample": s,
        "decimal": {
            "z": s.z.to_decimal(digits, Rounding::Nearest),
            "lambda": s.lambda.to_decimal(digits, Rounding::Nearest),
        }
    })
}

/// The shared JSON shape for a polygon state, used by both the CLI and
/// the service so the two agree byte for byte.
pub fn polygon_view(poly: &AtfPolygon, digits: usize) -> Value {
    let embedding = extract_embedding(poly).ok().map(|s| sample_view(&s, digits));
    let lengths = poly.side_lengths().ok().map(|l| {
        json!({
            "exact": l,
            "decimal": {
                "oy": l.oy.to_decimal(digits, Rounding::Nearest),
                "yv": l.yv.to_decimal(digits, Rounding::Nearest),
                "xv": l.xv.to_decimal(digits, Rounding::Nearest),
                "ox": l.ox.to_decimal(digits, Rounding::Nearest),
            }
        })
    });
    json!({
        "polygon": to_json(poly),
        "word": poly.word_string(),
        "lengths": lengths,
        "embedding": embedding,
    })
}

/// `floor(sqrt(x) * 10^digits) / 10^digits` for `x >= 0`, as a string.
pub fn sqrt_decimal(x: &QuadNum, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(2 * digits as u32);
    let n = (x * &QuadNum::from(scale)).floor();
    let r = if n.sign() == num_bigint::Sign::Minus { BigInt::from(0) } else { n.sqrt() };
    let s = r.to_string();
    if digits == 0 {
        return s;
    }
    let padded = format!("{:0>width$}", s, width = digits + 1);
    let (int, frac) = padded.split_at(padded.len() - digits);
    format!("{int}.{frac}")
}

pub struct Session {
    pub beta: QuadNum,
    pub history: Vec<AtfPolygon>,
}

impl Session {
    fn current(&self) -> &AtfPolygon {
        self.history.last().expect("history starts with the initial polygon")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub beta: Option<Value>,
    pub preset: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutateRequest {
    pub vertex: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayRequest {
    pub word: String,
}

/// Chart request; `None` fields take the sweep defaults.
#[derive(Clone, Debug, Default)]
pub struct BoundsRequest {
    pub k: Option<u64>,
    pub lo: Option<String>,
    pub hi: Option<String>,
    pub samples: Option<usize>,
}

pub struct SessionService {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next: AtomicU64,
    digits: usize,
}

impl SessionService {
    pub fn new(digits: usize) -> Self {
        SessionService { sessions: RwLock::new(HashMap::new()), next: AtomicU64::new(1), digits }
    }

    async fn session(&self, id: &str) -> std::result::Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions.read().await.get(id).cloned().ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    pub async fn create_session(&self, req: CreateRequest) -> ServiceResult {
        let beta = match (req.beta, req.preset) {
            (Some(_), Some(_)) => return Err(bad("give either beta or preset, not both")),
            (Some(Value::String(s)), None) => s.parse::<QuadNum>().map_err(bad)?,
            (Some(v), None) => serde_json::from_value::<QuadNum>(v).map_err(bad)?,
            (None, Some(p)) => parse_preset(&p).map_err(bad)?,
            (None, None) => parse_preset("main").map_err(bad)?,
        };
        let poly = init_polydisk(&beta)?;
        let id = format!("s{}", self.next.fetch_add(1, Ordering::Relaxed));
        let mut view = polygon_view(&poly, self.digits);
        view["id"] = json!(id);
        view["beta"] = json!(beta);
        let session = Session { beta, history: vec![poly] };
        self.sessions.write().await.insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    pub async fn get_polygon(&self, id: &str) -> ServiceResult {
        let s = self.session(id).await?;
        let g = s.lock().await;
        Ok(polygon_view(g.current(), self.digits))
    }

    pub async fn get_svg(&self, id: &str) -> std::result::Result<String, ServiceError> {
        let s = self.session(id).await?;
        let g = s.lock().await;
        Ok(to_svg(g.current(), 6))
    }

    pub async fn mutate(&self, id: &str, req: MutateRequest) -> ServiceResult {
        let mut chars = req.vertex.trim().chars();
        let label = match (chars.next(), chars.next()) {
            (Some(c), None) => Label::from_letter(c).map_err(bad)?,
            _ => return Err(bad(format!("vertex must be one of x, y, v; got '{}'", req.vertex))),
        };
        let s = self.session(id).await?;
        let mut g = s.lock().await;
        let next = mutate(g.current(), label)?;
        let view = polygon_view(&next, self.digits);
        g.history.push(next);
        Ok(view)
    }

    pub async fn undo(&self, id: &str) -> ServiceResult {
        let s = self.session(id).await?;
        let mut g = s.lock().await;
        if g.history.len() == 1 {
            return Err(ServiceError::Engine(Error::Precondition("nothing to undo".into())));
        }
        g.history.pop();
        Ok(polygon_view(g.current(), self.digits))
    }

    /// Resets to the initial polygon and applies `word`. The session is
    /// left unchanged when any step fails.
    pub async fn replay(&self, id: &str, req: ReplayRequest) -> ServiceResult {
        let letters = staircase_core::atf::parse_word(&req.word).map_err(bad)?;
        let s = self.session(id).await?;
        let mut g = s.lock().await;
        let mut history = vec![g.history[0].clone()];
        for (step, label) in letters.into_iter().enumerate() {
            let next = mutate(history.last().expect("non-empty"), label)
                .map_err(|e| Error::AtStep { step, source: Box::new(e) })?;
            history.push(next);
        }
        g.history = history;
        Ok(polygon_view(g.current(), self.digits))
    }

    pub async fn get_embedding(&self, id: &str) -> ServiceResult {
        let s = self.session(id).await?;
        let g = s.lock().await;
        let e = extract_embedding(g.current())?;
        Ok(sample_view(&e, self.digits))
    }

    /// Envelope of the staircase classes with `ech_index <= K`, the ECH
    /// sweep, the volume curve and the embedding markers of this session.
    pub async fn get_bounds(&self, id: &str, req: BoundsRequest) -> ServiceResult {
        let k = req.k.unwrap_or(2000);
        if k == 0 || k > MAX_BOUNDS_K {
            return Err(bad(format!("k must be in 1..={MAX_BOUNDS_K}")));
        }
        let zs = bounds_grid(&req)?;
        let (beta, markers) = {
            let s = self.session(id).await?;
            let g = s.lock().await;
            let markers: Vec<BoundSample> = g.history.iter().filter_map(|p| extract_embedding(p).ok()).collect();
            (g.beta.clone(), markers)
        };
        let digits = self.digits;
        tokio::task::spawn_blocking(move || compute_bounds(&beta, k, &zs, &markers, digits))
            .await
            .map_err(|e| bad(format!("bounds task failed: {e}")))?
    }
}

fn bounds_grid(req: &BoundsRequest) -> std::result::Result<Vec<QuadNum>, ServiceError> {
    if req.lo.is_none() && req.hi.is_none() && req.samples.is_none() {
        return Ok(default_sweep_samples());
    }
    let parse = |s: &Option<String>, d: i64| -> std::result::Result<QuadNum, ServiceError> {
        match s {
            Some(s) => {
                let v: QuadNum = s.parse().map_err(bad)?;
                if !v.is_rational() {
                    return Err(bad("range ends must be rational"));
                }
                Ok(v)
            }
            None => Ok(QuadNum::from(d)),
        }
    };
    let (lo, hi) = (parse(&req.lo, 1)?, parse(&req.hi, 9)?);
    let n = req.samples.unwrap_or(200);
    if lo < QuadNum::one() || lo >= hi {
        return Err(bad("need 1 <= lo < hi"));
    }
    if !(2..=MAX_BOUNDS_SAMPLES).contains(&n) {
        return Err(bad(format!("samples must be in 2..={MAX_BOUNDS_SAMPLES}")));
    }
    let step = &(&hi - &lo) / &QuadNum::from((n - 1) as i64);
    Ok((0..n).map(|i| &lo + &(&step * &QuadNum::from(i as i64))).collect())
}

fn compute_bounds(beta: &QuadNum, k: u64, zs: &[QuadNum], markers: &[BoundSample], digits: usize) -> ServiceResult {
    let classes: Vec<_> = staircase_classes(20)?
        .into_iter()
        .filter(|c| ech_index(c) <= BigInt::from(k))
        .collect();
    let env = envelope(beta, &classes, zs)?;
    let sweep = lower_bound_sweep(beta, k, zs)?;
    let two_beta = beta * &QuadNum::from(2);
    let mut volume = Vec::with_capacity(zs.len());
    for z in zs {
        volume.push(json!({"z": z, "lambda_decimal": sqrt_decimal(&z.checked_div(&two_beta)?, digits)}));
    }
    let sweep: Vec<Value> = sweep
        .iter()
        .map(|s| {
            json!({
                "z": s.z,
                "lambda": s.lambda,
                "argmax_k": s.argmax_k,
                "lambda_decimal": s.lambda.to_decimal(digits, Rounding::Down),
            })
        })
        .collect();
    Ok(json!({
        "beta": beta,
        "k": k,
        "classes": classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "envelope": env,
        "sweep": sweep,
        "volume": volume,
        "embeddings": markers.iter().map(|m| sample_view(m, digits)).collect::<Vec<_>>(),
    }))
}

/// Replays `word` from the initial polygon outside any session.
pub fn replay_word(beta: &QuadNum, word: &str, digits: usize) -> std::result::Result<Value, Error> {
    let poly = apply_word(&init_polydisk(beta)?, word)?;
    Ok(polygon_view(&poly, digits))
}
