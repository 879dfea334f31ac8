use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::map::{build_map, Blaschke2D, Factor};
use crate::arith::GR;
use crate::error::{Error, Result};

/// A Gaussian rational as `[re_num, re_den, im_num, im_den]`.
pub type ExactParts = [i64; 4];

/// Plain-data description of a map: zero lists and rotation seeds.
///
/// Converting to [`Blaschke2D`] and back yields the same values in lowest
/// terms, so a second round trip is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub a: Vec<ExactParts>,
    pub b: Vec<ExactParts>,
    pub c: Vec<ExactParts>,
    pub d: Vec<ExactParts>,
    #[serde(default = "unit_seed")]
    pub u1: ExactParts,
    #[serde(default = "unit_seed")]
    pub u2: ExactParts,
}

fn unit_seed() -> ExactParts {
    [1, 1, 0, 1]
}

pub fn parts_to_gr(p: &ExactParts) -> Result<GR> {
    if p[1] == 0 || p[3] == 0 {
        return Err(Error::InvalidArgument(format!("zero denominator in {p:?}")));
    }
    Ok(GR::from_parts(p[0], p[1], p[2], p[3]))
}

pub fn gr_to_parts(x: &GR) -> Result<ExactParts> {
    let (a, b, c, d) = x.to_parts();
    let conv = |v: BigInt| {
        v.to_i64()
            .ok_or_else(|| Error::InvalidArgument(format!("{x} does not fit in 64-bit parts")))
    };
    Ok([conv(a)?, conv(b)?, conv(c)?, conv(d)?])
}

impl MapSpec {
    pub fn build(&self) -> Result<Blaschke2D> {
        let conv = |v: &Vec<ExactParts>| v.iter().map(parts_to_gr).collect::<Result<Vec<_>>>();
        build_map(
            conv(&self.a)?,
            conv(&self.b)?,
            conv(&self.c)?,
            conv(&self.d)?,
            parts_to_gr(&self.u1)?,
            parts_to_gr(&self.u2)?,
        )
    }

    pub fn from_map(f: &Blaschke2D) -> Result<MapSpec> {
        let conv = |k: Factor| f.zeros(k).iter().map(gr_to_parts).collect::<Result<Vec<_>>>();
        Ok(MapSpec {
            a: conv(Factor::A)?,
            b: conv(Factor::B)?,
            c: conv(Factor::C)?,
            d: conv(Factor::D)?,
            u1: gr_to_parts(f.theta1().seed())?,
            u2: gr_to_parts(f.theta2().seed())?,
        })
    }
}
