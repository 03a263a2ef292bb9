//! Versioned JSON request/response protocol over immutable diagram
//! snapshots.
//!
//! Every successful mutation creates a new snapshot id. Requests name the
//! snapshot they apply to (the latest if omitted), and responses carry the
//! snapshot id they answer. Replaying a request against the same snapshot
//! returns the cached response, so every request is idempotent.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bisector::trace_bisector;
use crate::error::{Error, Result};
use crate::geometry::{Point, Segment};
use crate::metric::HilbertBall;
use crate::polygon::ConvexPolygon;
use crate::scene::{to_json_line, BisectorDump, DiagramDump, Scene};
use crate::sector::{sector_decomposition, SectorLabels};
use crate::voronoi::cells::pair_of;
use crate::voronoi::{crossing_events, detect_degenerate_pair, z_region, CrossingEvent, Site, VoronoiDiagram};

pub const PROTOCOL_VERSION: u32 = 1;

const NO_SNAPSHOT: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequestKind {
    LoadScene,
    InsertSite,
    MoveSite,
    RemoveSite,
    QueryDistance,
    QueryBall,
    QueryBisector,
    QueryZregion,
    QuerySectors,
    FullDiagram,
}

impl RequestKind {
    pub fn is_mutation(self) -> bool {
        matches!(
            self,
            RequestKind::LoadScene | RequestKind::InsertSite | RequestKind::MoveSite | RequestKind::RemoveSite
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub version: u32,
    pub request: RequestKind,
    /// Snapshot the request applies to; the latest when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<u64>,
    #[serde(default)]
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorObject {
    /// Exit-code taxonomy of the CLI: 2 input, 3 degeneracy, 1 internal.
    pub code: i32,
    pub kind: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub version: u32,
    pub request: Option<RequestKind>,
    pub snapshot: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorObject>,
}

/// A site given either by id or by coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Id(String),
    Pos(Point),
}

#[derive(Deserialize)]
struct LoadScene {
    scene: Scene,
}

#[derive(Deserialize)]
struct SitePayload {
    id: String,
    pos: Point,
}

#[derive(Deserialize)]
struct IdPayload {
    id: String,
}

#[derive(Deserialize)]
struct PairPayload {
    a: PointRef,
    b: PointRef,
}

#[derive(Deserialize)]
struct BallPayload {
    center: PointRef,
    radius: f64,
}

#[derive(Serialize)]
struct SectorDump {
    labels: SectorLabels,
    region: ConvexPolygon,
    shared_pair: bool,
}

#[derive(Serialize)]
struct MoveEvent {
    other: String,
    #[serde(flatten)]
    event: CrossingEvent,
}

/// Outcome of one request before it is wrapped in a [`Response`].
struct Outcome {
    snapshot: u64,
    result: std::result::Result<Value, ErrorObject>,
}

fn error_object(e: &Error) -> ErrorObject {
    ErrorObject {
        code: e.exit_code(),
        kind: e.kind().to_string(),
        message: e.to_string(),
        detail: None,
    }
}

fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::InvalidRequest(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

/// Snapshot store plus response cache.
#[derive(Debug, Default)]
pub struct Session {
    snapshots: Vec<VoronoiDiagram>,
    cache: HashMap<(Option<u64>, String), Response>,
}

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn latest(&self) -> Option<u64> {
        self.snapshots.len().checked_sub(1).map(|i| i as u64)
    }

    pub fn snapshot(&self, id: u64) -> Option<&VoronoiDiagram> {
        self.snapshots.get(id as usize)
    }

    fn push(&mut self, d: VoronoiDiagram) -> u64 {
        self.snapshots.push(d);
        (self.snapshots.len() - 1) as u64
    }

    /// Handles one line of JSON and returns one line of JSON.
    pub fn handle_line(&mut self, line: &str) -> String {
        let resp = match serde_json::from_str::<Request>(line) {
            Ok(req) => self.handle(&req),
            Err(e) => Response {
                version: PROTOCOL_VERSION,
                request: None,
                snapshot: self.latest(),
                result: None,
                error: Some(error_object(&Error::InvalidRequest(e.to_string()))),
            },
        };
        to_json_line(&resp)
    }

    pub fn handle(&mut self, req: &Request) -> Response {
        if req.version != PROTOCOL_VERSION {
            let e = Error::InvalidRequest(format!("unsupported protocol version {}", req.version));
            return Response {
                version: PROTOCOL_VERSION,
                request: Some(req.request),
                snapshot: self.latest(),
                result: None,
                error: Some(error_object(&e)),
            };
        }
        let base = req.snapshot.or_else(|| self.latest());
        let key = (base, format!("{:?}|{}", req.request, req.payload));
        if let Some(r) = self.cache.get(&key) {
            return r.clone();
        }
        let out = self.dispatch(req.request, base, &req.payload);
        let (result, error) = match out.result {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e)),
        };
        let resp = Response {
            version: PROTOCOL_VERSION,
            request: Some(req.request),
            snapshot: (out.snapshot != NO_SNAPSHOT).then_some(out.snapshot),
            result,
            error,
        };
        if out.snapshot != NO_SNAPSHOT {
            self.cache.insert(key, resp.clone());
        }
        resp
    }

    fn dispatch(&mut self, kind: RequestKind, base: Option<u64>, payload: &Value) -> Outcome {
        if kind == RequestKind::LoadScene {
            return match parse::<LoadScene>(payload).and_then(|p| p.scene.build()) {
                Ok(d) => {
                    let dump = to_value(&DiagramDump::of(&d));
                    Outcome {
                        snapshot: self.push(d),
                        result: Ok(dump),
                    }
                }
                Err(e) => Outcome {
                    snapshot: base.unwrap_or(NO_SNAPSHOT),
                    result: Err(error_object(&e)),
                },
            };
        }
        let Some(id) = base else {
            return Outcome {
                snapshot: NO_SNAPSHOT,
                result: Err(error_object(&Error::InvalidRequest("no scene loaded".into()))),
            };
        };
        let Some(d) = self.snapshot(id).cloned() else {
            return Outcome {
                snapshot: NO_SNAPSHOT,
                result: Err(error_object(&Error::InvalidRequest(format!("unknown snapshot {id}")))),
            };
        };
        match self.run(kind, &d, payload) {
            Ok((Some(next), v)) => Outcome {
                snapshot: self.push(next),
                result: Ok(v),
            },
            Ok((None, v)) => Outcome {
                snapshot: id,
                result: Ok(v),
            },
            Err(e) => Outcome {
                snapshot: id,
                result: Err(e),
            },
        }
    }

    #[allow(clippy::result_large_err)]
    fn run(
        &self,
        kind: RequestKind,
        d: &VoronoiDiagram,
        payload: &Value,
    ) -> std::result::Result<(Option<VoronoiDiagram>, Value), ErrorObject> {
        let err = |e: Error| error_object(&e);
        let resolve = |r: &PointRef| -> Result<Point> {
            match r {
                PointRef::Pos(p) => Ok(*p),
                PointRef::Id(id) => d.site(id).map(|s| s.pos).ok_or_else(|| Error::UnknownSite(id.clone())),
            }
        };
        let label = |r: &PointRef| match r {
            PointRef::Id(id) => id.clone(),
            PointRef::Pos(p) => format!("({}, {})", p.x, p.y),
        };
        match kind {
            RequestKind::LoadScene => unreachable!("handled by dispatch"),
            RequestKind::InsertSite => {
                let p: SitePayload = parse(payload).map_err(err)?;
                let next = d.insert_site(Site::new(p.id.clone(), p.pos)).map_err(err)?;
                let mut bisectors = Vec::new();
                for s in d.sites() {
                    let pair = pair_of(&s.id, &p.id);
                    match trace_bisector(d.domain(), s.pos, p.pos) {
                        Ok(c) => bisectors.push(to_value(&BisectorDump::of(d.domain(), pair, &c))),
                        Err(Error::DegeneratePair(..)) => {
                            let deg = detect_degenerate_pair(d.domain(), s.pos, p.pos)
                                .map_err(err)?
                                .map(|g| g.report(&s.id, &p.id));
                            bisectors.push(serde_json::json!({ "pair": pair, "degeneracy": deg }));
                        }
                        Err(e) => return Err(err(e)),
                    }
                }
                let v = serde_json::json!({ "diagram": DiagramDump::of(&next), "bisectors": bisectors });
                Ok((Some(next), v))
            }
            RequestKind::MoveSite => {
                let p: SitePayload = parse(payload).map_err(err)?;
                let from = d.site(&p.id).ok_or_else(|| err(Error::UnknownSite(p.id.clone())))?.pos;
                let next = d.move_site(&p.id, p.pos).map_err(err)?;
                let mut events = Vec::new();
                if let Ok(seg) = Segment::new(from, p.pos) {
                    for other in d.sites().iter().filter(|s| s.id != p.id) {
                        for event in crossing_events(d.domain(), seg, other.pos) {
                            events.push(MoveEvent {
                                other: other.id.clone(),
                                event,
                            });
                        }
                    }
                }
                events.sort_by(|a, b| a.event.u.total_cmp(&b.event.u).then(a.other.cmp(&b.other)));
                let v = serde_json::json!({ "diagram": DiagramDump::of(&next), "events": events });
                Ok((Some(next), v))
            }
            RequestKind::RemoveSite => {
                let p: IdPayload = parse(payload).map_err(err)?;
                let next = d.remove_site(&p.id).map_err(err)?;
                let v = serde_json::json!({ "diagram": DiagramDump::of(&next) });
                Ok((Some(next), v))
            }
            RequestKind::FullDiagram => Ok((None, to_value(&DiagramDump::of(d)))),
            RequestKind::QueryDistance => {
                let p: PairPayload = parse(payload).map_err(err)?;
                let (a, b) = (resolve(&p.a).map_err(err)?, resolve(&p.b).map_err(err)?);
                let h = d.domain().hilbert_distance(a, b).map_err(err)?;
                Ok((None, serde_json::json!({ "distance": h })))
            }
            RequestKind::QueryBall => {
                let p: BallPayload = parse(payload).map_err(err)?;
                let c = resolve(&p.center).map_err(err)?;
                let ball: HilbertBall = d.domain().hilbert_ball(c, p.radius).map_err(err)?;
                Ok((None, to_value(&ball)))
            }
            RequestKind::QueryBisector => {
                let p: PairPayload = parse(payload).map_err(err)?;
                let (a, b) = (resolve(&p.a).map_err(err)?, resolve(&p.b).map_err(err)?);
                let pair = pair_of(&label(&p.a), &label(&p.b));
                match trace_bisector(d.domain(), a, b) {
                    Ok(c) => Ok((None, to_value(&BisectorDump::of(d.domain(), pair, &c)))),
                    Err(Error::DegeneratePair(..)) => {
                        let mut obj = err(Error::DegeneratePair(pair[0].clone(), pair[1].clone()));
                        obj.detail = detect_degenerate_pair(d.domain(), a, b)
                            .map_err(err)?
                            .map(|g| to_value(&g.report(&label(&p.a), &label(&p.b))));
                        Err(obj)
                    }
                    Err(e) => Err(err(e)),
                }
            }
            RequestKind::QueryZregion => {
                let p: PairPayload = parse(payload).map_err(err)?;
                let (a, b) = (resolve(&p.a).map_err(err)?, resolve(&p.b).map_err(err)?);
                let z = z_region(d.domain(), a, b).map_err(err)?;
                Ok((None, to_value(&z)))
            }
            RequestKind::QuerySectors => {
                let p: PairPayload = parse(payload).map_err(err)?;
                let (a, b) = (resolve(&p.a).map_err(err)?, resolve(&p.b).map_err(err)?);
                let sectors = sector_decomposition(d.domain(), a, b).map_err(err)?;
                let out: Vec<SectorDump> = sectors
                    .into_iter()
                    .map(|s| SectorDump {
                        shared_pair: s.labels.is_shared_pair(),
                        labels: s.labels,
                        region: s.region,
                    })
                    .collect();
                Ok((None, to_value(&out)))
            }
        }
    }
}
