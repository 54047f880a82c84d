//! Schemas, canonical JSON and file access.

use std::io::Write;
use std::path::Path;

use flipkit::fuchsian::{genus2_group, FuchsianGroup};
use flipkit::polyhedra::{hull_of, ConvexPolyhedron};
use flipkit::tilings::FlippableTiling;
use flipkit::{Error, Result, Vec4};
use nalgebra::Vector3;
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::Formatter;
use serde_json::Value;

/// polyhedron.v1
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyhedronFile {
    pub model: String,
    pub vertices: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<usize>>>,
}

impl PolyhedronFile {
    pub fn from_polyhedron(p: &ConvexPolyhedron) -> Self {
        PolyhedronFile {
            model: "S3".into(),
            vertices: p.vertices.iter().map(|v| [v[0], v[1], v[2], v[3]]).collect(),
            faces: Some(p.faces.clone()),
        }
    }

    /// Faces are recomputed by the hull when absent.
    pub fn to_polyhedron(&self) -> Result<ConvexPolyhedron> {
        if self.model != "S3" {
            return Err(Error::Parse(format!("unknown model {:?}", self.model)));
        }
        let vs: Vec<Vec4> = self.vertices.iter().map(|v| Vec4::from(*v)).collect();
        match &self.faces {
            Some(f) => ConvexPolyhedron::from_faces(vs, f.clone()),
            None => hull_of(&vs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayFile {
    pub p: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// fuchsian.v1
#[derive(Clone, Debug, PartialEq, serde::Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuchsianFile {
    pub genus: usize,
    pub rays: Vec<RayFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_len_cap: Option<usize>,
}

impl FuchsianFile {
    pub fn group(&self) -> Result<FuchsianGroup> {
        match self.genus {
            2 => Ok(genus2_group()),
            g => Err(Error::Geometry(format!("only genus 2 is available, got {g}"))),
        }
    }

    pub fn rays(&self) -> Vec<Vector3<f64>> {
        self.rays.iter().map(|r| Vector3::from(r.p)).collect()
    }
}

#[derive(Clone, Debug)]
pub enum Artifact {
    Polyhedron(PolyhedronFile),
    Tiling(FlippableTiling),
    Fuchsian(FuchsianFile),
}

impl Artifact {
    pub fn schema(&self) -> &'static str {
        match self {
            Artifact::Polyhedron(_) => "polyhedron.v1",
            Artifact::Tiling(_) => "tiling.v1",
            Artifact::Fuchsian(_) => "fuchsian.v1",
        }
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reads any of the three schemas, told apart by their distinctive key.
pub fn parse_artifact(text: &str) -> Result<Artifact> {
    let v: Value = serde_json::from_str(text).map_err(parse_err)?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    if obj.contains_key("model") {
        Ok(Artifact::Polyhedron(serde_json::from_value(v).map_err(parse_err)?))
    } else if obj.contains_key("handedness") {
        Ok(Artifact::Tiling(serde_json::from_value(v).map_err(parse_err)?))
    } else if obj.contains_key("genus") {
        Ok(Artifact::Fuchsian(serde_json::from_value(v).map_err(parse_err)?))
    } else {
        Err(Error::Parse("unrecognized schema (no model, handedness or genus key)".into()))
    }
}

pub fn parse_polyhedron(text: &str) -> Result<ConvexPolyhedron> {
    match parse_artifact(text)? {
        Artifact::Polyhedron(p) => p.to_polyhedron(),
        a => Err(Error::Parse(format!("expected polyhedron.v1, got {}", a.schema()))),
    }
}

pub fn parse_tiling(text: &str) -> Result<FlippableTiling> {
    match parse_artifact(text)? {
        Artifact::Tiling(t) => Ok(t),
        a => Err(Error::Parse(format!("expected tiling.v1, got {}", a.schema()))),
    }
}

pub fn parse_fuchsian(text: &str) -> Result<FuchsianFile> {
    match parse_artifact(text)? {
        Artifact::Fuchsian(f) => Ok(f),
        a => Err(Error::Parse(format!("expected fuchsian.v1, got {}", a.schema()))),
    }
}

/// Compact JSON with every float written with 17 significant digits.
struct CanonicalFloats;

impl Formatter for CanonicalFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFloats);
    value.serialize(&mut ser).map_err(|e| Error::Geometry(format!("cannot serialize: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Geometry(e.to_string()))
}

pub fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Writes to `path`, or to stdout when absent.
pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
