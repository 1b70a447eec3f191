use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    make_circle, make_doubled_segment, make_ellipse, make_fourier_curve, make_regular_polygon,
    make_stadium, make_trefoil, realize, ArcLengthCurve,
};
use crate::error::{Error, Result};

fn default_dimension() -> usize {
    2
}

fn default_length() -> f64 {
    2.0 * PI
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoParams {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StadiumParams {
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonParams {
    pub sides: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipseParams {
    pub axis_ratio: f64,
}

/// One Fourier mode in serialized form: `re` and `im` hold the d components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub n: i32,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

/// Serializable description of a curve.
///
/// Named families serialize as `{kind, params, dimension, length}`; Fourier
/// curves as `{kind: "fourier", coefficients: [{n, re, im}, ...]}` with an
/// optional target `length` (otherwise the realized length is kept).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveDescriptor {
    Circle {
        #[serde(default)]
        params: NoParams,
        #[serde(default = "default_dimension")]
        dimension: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    Stadium {
        params: StadiumParams,
        #[serde(default = "default_dimension")]
        dimension: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    Polygon {
        params: PolygonParams,
        #[serde(default = "default_dimension")]
        dimension: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    DoubledSegment {
        #[serde(default)]
        params: NoParams,
        #[serde(default = "default_dimension")]
        dimension: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    Ellipse {
        params: EllipseParams,
        #[serde(default = "default_dimension")]
        dimension: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    Trefoil {
        #[serde(default)]
        params: NoParams,
        #[serde(default = "trefoil_dimension")]
        dimension: usize,
        #[serde(default = "default_length")]
        length: f64,
    },
    Fourier {
        coefficients: Vec<CoefficientEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        length: Option<f64>,
    },
}

fn trefoil_dimension() -> usize {
    3
}

fn planar_only(dimension: usize) -> Result<()> {
    if dimension == 2 {
        Ok(())
    } else {
        Err(Error::param(
            "dimension",
            format!("this family is planar, got {dimension}"),
        ))
    }
}

impl CurveDescriptor {
    pub fn circle(length: f64) -> Self {
        CurveDescriptor::Circle {
            params: NoParams {},
            dimension: 2,
            length,
        }
    }

    /// Parse either a JSON object or a short name such as `circle`,
    /// `stadium:0.5`, `polygon:6`, `ellipse:2`, `doubled-segment`, `trefoil`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| Error::param("curve", format!("malformed curve JSON: {e}")));
        }
        let (name, arg) = match text.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (text, None),
        };
        let number = |what: &'static str| -> Result<f64> {
            arg.ok_or_else(|| {
                Error::param(
                    "curve",
                    format!("`{name}` needs a parameter, e.g. {name}:{what}"),
                )
            })?
            .parse::<f64>()
            .map_err(|e| Error::param("curve", format!("bad parameter for `{name}`: {e}")))
        };
        let length = default_length();
        Ok(match name {
            "circle" => CurveDescriptor::circle(length),
            "stadium" => CurveDescriptor::Stadium {
                params: StadiumParams { a: number("0.5")? },
                dimension: 2,
                length,
            },
            "polygon" => {
                let sides = number("6")?;
                if sides.fract() != 0.0 || sides < 0.0 {
                    return Err(Error::param(
                        "curve",
                        format!("polygon side count must be a whole number, got {sides}"),
                    ));
                }
                CurveDescriptor::Polygon {
                    params: PolygonParams {
                        sides: sides as usize,
                    },
                    dimension: 2,
                    length,
                }
            }
            "ellipse" => CurveDescriptor::Ellipse {
                params: EllipseParams {
                    axis_ratio: number("2")?,
                },
                dimension: 2,
                length,
            },
            "doubled-segment" | "doubled_segment" | "segment" => CurveDescriptor::DoubledSegment {
                params: NoParams {},
                dimension: 2,
                length,
            },
            "trefoil" => CurveDescriptor::Trefoil {
                params: NoParams {},
                dimension: 3,
                length,
            },
            other => {
                return Err(Error::param(
                    "curve",
                    format!("unknown curve family `{other}`"),
                ))
            }
        })
    }

    pub fn build(&self) -> Result<ArcLengthCurve> {
        match self {
            CurveDescriptor::Circle {
                dimension, length, ..
            } => make_circle(*length, *dimension),
            CurveDescriptor::Stadium {
                params,
                dimension,
                length,
            } => {
                planar_only(*dimension)?;
                make_stadium(params.a)?.with_length(*length)
            }
            CurveDescriptor::Polygon {
                params,
                dimension,
                length,
            } => {
                planar_only(*dimension)?;
                make_regular_polygon(params.sides, *length)
            }
            CurveDescriptor::DoubledSegment {
                dimension, length, ..
            } => {
                planar_only(*dimension)?;
                make_doubled_segment(*length)
            }
            CurveDescriptor::Ellipse {
                params,
                dimension,
                length,
            } => {
                planar_only(*dimension)?;
                make_ellipse(params.axis_ratio, *length)
            }
            CurveDescriptor::Trefoil {
                dimension, length, ..
            } => {
                if *dimension != 3 {
                    return Err(Error::param("dimension", "the trefoil lives in R^3"));
                }
                make_trefoil(*length)
            }
            CurveDescriptor::Fourier {
                coefficients,
                length,
            } => {
                let dimension = coefficients.first().map_or(2, |c| c.re.len());
                let mut entries = Vec::with_capacity(coefficients.len());
                for c in coefficients {
                    if c.re.len() != c.im.len() {
                        return Err(Error::param(
                            "coefficients",
                            format!("mode {}: re and im lengths differ", c.n),
                        ));
                    }
                    let v =
                        c.re.iter()
                            .zip(&c.im)
                            .map(|(&r, &i)| Complex64::new(r, i))
                            .collect();
                    entries.push((c.n, v));
                }
                let fc = make_fourier_curve(dimension, &entries)?.curve;
                let samples = (8 * fc.max_mode()).max(64);
                let curve = realize(&fc, samples, 1e-12)?;
                match length {
                    Some(l) => curve.with_length(*l),
                    None => Ok(curve),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_names() {
        for name in [
            "circle",
            "stadium:0.5",
            "polygon:6",
            "ellipse:2",
            "doubled-segment",
            "trefoil",
        ] {
            let desc = CurveDescriptor::parse(name).unwrap();
            let curve = desc.build().unwrap();
            assert!((curve.length() - 2.0 * PI).abs() < 1e-10, "{name}");
        }
        assert!(CurveDescriptor::parse("stadium").is_err());
        assert!(CurveDescriptor::parse("blob:3").is_err());
        assert!(CurveDescriptor::parse("polygon:6.5").is_err());
    }

    #[test]
    fn json_round_trip() {
        let desc = CurveDescriptor::parse(
            r#"{"kind":"stadium","params":{"a":0.25},"dimension":2,"length":3.0}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&desc).unwrap();
        assert_eq!(CurveDescriptor::parse(&text).unwrap(), desc);
        assert!((desc.build().unwrap().length() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn fourier_json() {
        let text = r#"{"kind":"fourier","coefficients":[
            {"n":1,"re":[0.5,0.0],"im":[0.0,-0.5]},
            {"n":-1,"re":[0.5,0.0],"im":[0.0,0.5]}]}"#;
        let curve = CurveDescriptor::parse(text).unwrap().build().unwrap();
        assert!((curve.length() - 2.0 * PI).abs() < 1e-12);
        let bad = r#"{"kind":"fourier","coefficients":[{"n":2,"re":[1.0,0.0],"im":[0.0,0.0]}]}"#;
        assert!(matches!(
            CurveDescriptor::parse(bad).unwrap().build(),
            Err(Error::RealityViolation { .. })
        ));
        assert!(CurveDescriptor::parse("{not json").is_err());
    }
}
