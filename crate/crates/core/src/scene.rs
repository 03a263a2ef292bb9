//! Scene files and diagram dumps: the single wire format shared by the CLI
//! and the protocol.
//!
//! Numbers are written with at most 17 significant digits (trailing zeros
//! trimmed), which round-trips every `f64`. Field order is fixed by the
//! struct definitions.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bisector::BisectorCurve;
use crate::conic::{classify_conic, ConicType};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::metric::Domain;
use crate::polygon::ConvexPolygon;
use crate::sector::SectorLabels;
use crate::voronoi::{DegeneracyReport, EdgeSource, Site, VoronoiDiagram};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSite {
    pub id: String,
    pub pos: Point,
}

/// A domain polygon (counter-clockwise) and a list of sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub polygon: Vec<Point>,
    #[serde(default)]
    pub sites: Vec<SceneSite>,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene> {
        serde_json::from_str(text).map_err(|e| Error::InvalidScene(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn sites(&self) -> Vec<Site> {
        self.sites.iter().map(|s| Site::new(s.id.clone(), s.pos)).collect()
    }

    pub fn domain(&self) -> Result<Domain> {
        Ok(Domain::new(ConvexPolygon::new(self.polygon.clone())?))
    }

    pub fn site(&self, id: &str) -> Result<Point> {
        self.sites
            .iter()
            .find(|s| s.id == id)
            .map(|s| s.pos)
            .ok_or_else(|| Error::UnknownSite(id.to_string()))
    }

    /// Builds the diagram by inserting the sites in file order.
    pub fn build(&self) -> Result<VoronoiDiagram> {
        VoronoiDiagram::build(ConvexPolygon::new(self.polygon.clone())?, &self.sites())
    }

    pub fn of_diagram(d: &VoronoiDiagram) -> Scene {
        Scene {
            polygon: d.polygon().vertices().to_vec(),
            sites: d
                .sites()
                .iter()
                .map(|s| SceneSite {
                    id: s.id.clone(),
                    pos: s.pos,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDump {
    pub site: String,
    /// Closed boundary, counter-clockwise, first vertex not repeated.
    pub polyline: Vec<Point>,
    /// `edges[i]` describes the edge from `polyline[i]` to `polyline[i + 1]`.
    pub edges: Vec<EdgeSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramDump {
    pub version: u32,
    pub scene: Scene,
    pub cells: Vec<CellDump>,
    pub degeneracies: Vec<DegeneracyReport>,
}

impl DiagramDump {
    pub fn of(d: &VoronoiDiagram) -> DiagramDump {
        DiagramDump {
            version: FORMAT_VERSION,
            scene: Scene::of_diagram(d),
            cells: d
                .cells()
                .iter()
                .map(|c| CellDump {
                    site: c.site.clone(),
                    polyline: c.boundary().to_vec(),
                    edges: c.provenance().to_vec(),
                })
                .collect(),
            degeneracies: d.degeneracies().to_vec(),
        }
    }

    pub fn from_json(text: &str) -> Result<DiagramDump> {
        serde_json::from_str(text).map_err(|e| Error::InvalidScene(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectorPieceDump {
    pub sector_edges: SectorLabels,
    pub conic: [f64; 6],
    pub k: f64,
    pub conic_type: ConicType,
    pub polyline: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectorDump {
    pub pair: [String; 2],
    pub endpoints: [Point; 2],
    pub max_residual: f64,
    pub pieces: Vec<BisectorPieceDump>,
}

impl BisectorDump {
    pub fn of(domain: &Domain, pair: [String; 2], curve: &BisectorCurve) -> BisectorDump {
        BisectorDump {
            pair,
            endpoints: curve.endpoints,
            max_residual: curve.max_residual(domain),
            pieces: curve
                .pieces
                .iter()
                .map(|p| BisectorPieceDump {
                    sector_edges: p.sector.labels,
                    conic: p.conic.coeffs(),
                    k: p.conic.k,
                    conic_type: classify_conic(&p.conic).tag,
                    polyline: p.polyline.clone(),
                })
                .collect(),
        }
    }
}

/// Formats a float with at most 17 significant digits, plain decimal
/// notation for moderate magnitudes and exponent notation otherwise.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0.0".into()
        } else {
            "0.0".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let mut s = format!("{v:.decimals$}");
        if s.contains('.') {
            let trimmed = s.trim_end_matches('0');
            s = if trimmed.ends_with('.') {
                format!("{trimmed}0")
            } else {
                trimmed.to_string()
            };
        } else {
            s.push_str(".0");
        }
        s
    } else {
        let m = mantissa.trim_end_matches('0');
        let m = if m.ends_with('.') {
            format!("{m}0")
        } else {
            m.to_string()
        };
        format!("{m}e{exp}")
    }
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    match (n.as_i64(), n.as_u64(), n.as_f64()) {
        (Some(i), _, _) if !n.is_f64() => out.push_str(&i.to_string()),
        (_, Some(u), _) if !n.is_f64() => out.push_str(&u.to_string()),
        (_, _, Some(f)) => out.push_str(&format_f64(f)),
        _ => out.push_str(&n.to_string()),
    }
}

fn write_value(out: &mut String, v: &Value, indent: Option<usize>) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => write_number(out, n),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            let flat = items.iter().all(|x| !x.is_array() && !x.is_object());
            if items.is_empty() || flat || indent.is_none() {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(if indent.is_some() { ", " } else { "," });
                    }
                    write_value(out, x, None);
                }
                out.push(']');
            } else {
                let level = indent.unwrap_or(0);
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    out.push_str(if i > 0 { ",\n" } else { "\n" });
                    push_indent(out, level + 1);
                    write_value(out, x, Some(level + 1));
                }
                out.push('\n');
                push_indent(out, level);
                out.push(']');
            }
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, x)) in map.iter().enumerate() {
                match indent {
                    Some(level) => {
                        out.push_str(if i > 0 { ",\n" } else { "\n" });
                        push_indent(out, level + 1);
                        out.push_str(&Value::String(k.clone()).to_string());
                        out.push_str(": ");
                        write_value(out, x, Some(level + 1));
                    }
                    None => {
                        if i > 0 {
                            out.push(',');
                        }
                        out.push_str(&Value::String(k.clone()).to_string());
                        out.push(':');
                        write_value(out, x, None);
                    }
                }
            }
            if let Some(level) = indent {
                out.push('\n');
                push_indent(out, level);
            }
            out.push('}');
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

/// Pretty-printed JSON with the 17-digit float format; arrays of scalars
/// (points, coefficient vectors) stay on one line.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut out = String::new();
    write_value(&mut out, &v, Some(0));
    out.push('\n');
    out
}

/// Compact single-line JSON with the 17-digit float format.
pub fn to_json_line<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable value");
    let mut out = String::new();
    write_value(&mut out, &v, None);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [
            0.1,
            1.2345678901234567e-5,
            1.0 / 3.0,
            1e-300,
            -2.5e20,
            123456789.0,
            1.0986122886681098,
            f64::MIN_POSITIVE,
            5e-324,
        ] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert!(mantissa.trim_start_matches('0').len() <= 17, "{s}");
        }
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(2.0), "2.0");
        assert_eq!(format_f64(1e20), "1.0e20");
        assert_eq!(to_json_line(&[f64::NAN, 1.5]), "[null,1.5]");
        assert_eq!(to_json_string(&Point::new(0.5, -2.0)), "[0.5, -2.0]\n");
    }

    #[test]
    fn dump_round_trip() {
        let scene = Scene::from_json(
            r#"{"polygon": [[0,0],[1,0],[1,1],[0,1]],
                "sites": [{"id":"a","pos":[0.2,0.15]},{"id":"b","pos":[0.8,0.9]},
                          {"id":"c","pos":[0.5,0.3]},{"id":"d","pos":[0.5,0.7]}]}"#,
        )
        .unwrap();
        let d = scene.build().unwrap();
        assert_eq!(d.degeneracies().len(), 1);
        let dump = DiagramDump::of(&d);
        let text = dump.to_json();
        assert_eq!(DiagramDump::from_json(&text).unwrap(), dump);
        assert_eq!(to_json_string(&DiagramDump::from_json(&text).unwrap()), text);
    }

    #[test]
    fn bad_scene_is_rejected() {
        assert!(matches!(Scene::from_json("{"), Err(Error::InvalidScene(_))));
        let s = Scene::from_json(r#"{"polygon": [[0,0],[1,1],[1,0]]}"#).unwrap();
        assert!(matches!(s.build(), Err(Error::InvalidPolygon(_))));
    }
}
