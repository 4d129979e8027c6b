//! Certificates emitted by the searches and deciders, with their JSON forms.
//!
//! Block certificates live inside `R[t]`: a block with idempotent `e` has coefficients in
//! `eR` and uses `e` as its identity.

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::{Element, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    Sr,
    Src,
}

impl FactorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FactorKind::Sr => "SR",
            FactorKind::Src => "SRC",
        }
    }
}

/// `h = f0 f1` with `f0(0)`, `f1(1)` units; with a Bezout pair `u f0 + v f1 = 1` for SRC.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrcCertificate {
    pub f0: Poly,
    pub f1: Poly,
    pub bezout: Option<(Poly, Poly)>,
    pub kind: FactorKind,
}

/// `h = h0 p0` with `h0(0)` a unit and `p0 - t^d` nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpCertificate {
    pub h0: Poly,
    pub p0: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block<T> {
    pub idempotent: Element,
    pub cert: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks<T> {
    pub blocks: Vec<Block<T>>,
}

pub type GsrcCertificate = Blocks<SrcCertificate>;
pub type GspCertificate = Blocks<SpCertificate>;

impl<T> Blocks<T> {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `A = E + U`, `E^2 = E`, `U U_inv = U_inv U = I`, `E U = U E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongCleanCertificate {
    pub e: Matrix,
    pub u: Matrix,
    pub u_inv: Matrix,
}

/// `A^(k+1) X = A^k = Y A^(k+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRegularCertificate {
    pub k: u32,
    pub x: Matrix,
    pub y: Matrix,
}

fn field<'a>(j: &'a Json, key: &str) -> Result<&'a Json> {
    j.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

impl SrcCertificate {
    pub fn to_json(&self) -> Json {
        let mut j = json!({
            "kind": self.kind.as_str(),
            "f0": self.f0.to_json(),
            "f1": self.f1.to_json(),
        });
        if let Some((u, v)) = &self.bezout {
            j["bezout"] = json!({"u": u.to_json(), "v": v.to_json()});
        }
        j
    }

    pub fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        let kind = match field(j, "kind")?.as_str() {
            Some("SR") => FactorKind::Sr,
            Some("SRC") => FactorKind::Src,
            _ => return Err(Error::Parse("kind must be \"SR\" or \"SRC\"".into())),
        };
        let bezout = match j.get("bezout") {
            Some(b) => Some((Poly::from_json(ring, field(b, "u")?)?, Poly::from_json(ring, field(b, "v")?)?)),
            None => None,
        };
        Ok(SrcCertificate {
            f0: Poly::from_json(ring, field(j, "f0")?)?,
            f1: Poly::from_json(ring, field(j, "f1")?)?,
            bezout,
            kind,
        })
    }
}

impl SpCertificate {
    pub fn to_json(&self) -> Json {
        json!({"h0": self.h0.to_json(), "p0": self.p0.to_json()})
    }

    pub fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        Ok(SpCertificate {
            h0: Poly::from_json(ring, field(j, "h0")?)?,
            p0: Poly::from_json(ring, field(j, "p0")?)?,
        })
    }
}

/// Block certificate JSON: `{"blocks": [{"idempotent": e, ...cert fields}]}`.
pub trait BlockJson: Sized {
    fn to_json(&self) -> Json;
    fn from_json(ring: &Ring, j: &Json) -> Result<Self>;
}

impl BlockJson for SrcCertificate {
    fn to_json(&self) -> Json {
        SrcCertificate::to_json(self)
    }
    fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        SrcCertificate::from_json(ring, j)
    }
}

impl BlockJson for SpCertificate {
    fn to_json(&self) -> Json {
        SpCertificate::to_json(self)
    }
    fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        SpCertificate::from_json(ring, j)
    }
}

impl<T: BlockJson> Blocks<T> {
    pub fn to_json(&self, ring: &Ring) -> Json {
        let blocks: Vec<Json> = self
            .blocks
            .iter()
            .map(|b| {
                let mut j = b.cert.to_json();
                j["idempotent"] = ring.to_json(&b.idempotent);
                j
            })
            .collect();
        json!({"block_count": blocks.len(), "blocks": blocks})
    }

    pub fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        let items = field(j, "blocks")?
            .as_array()
            .ok_or_else(|| Error::Parse("blocks must be an array".into()))?;
        let blocks = items
            .iter()
            .map(|b| {
                Ok(Block {
                    idempotent: ring.from_json(field(b, "idempotent")?)?,
                    cert: T::from_json(ring, b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Blocks { blocks })
    }
}

impl StrongCleanCertificate {
    pub fn to_json(&self) -> Json {
        json!({"E": self.e.to_json(), "U": self.u.to_json(), "U_inv": self.u_inv.to_json()})
    }

    pub fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        Ok(StrongCleanCertificate {
            e: Matrix::from_json(ring, field(j, "E")?)?,
            u: Matrix::from_json(ring, field(j, "U")?)?,
            u_inv: Matrix::from_json(ring, field(j, "U_inv")?)?,
        })
    }
}

impl PiRegularCertificate {
    pub fn to_json(&self) -> Json {
        json!({"k": self.k, "X": self.x.to_json(), "Y": self.y.to_json()})
    }

    pub fn from_json(ring: &Ring, j: &Json) -> Result<Self> {
        let k = field(j, "k")?
            .as_u64()
            .filter(|&k| k >= 1 && k <= u32::MAX as u64)
            .ok_or_else(|| Error::Parse("k must be a positive integer".into()))?;
        Ok(PiRegularCertificate {
            k: k as u32,
            x: Matrix::from_json(ring, field(j, "X")?)?,
            y: Matrix::from_json(ring, field(j, "Y")?)?,
        })
    }
}
