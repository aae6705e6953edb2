//! JSON formats for lattices, matroid ranks and kernels, and report output.
//!
//! Rationals are always written as `"p/q"` with `q > 0` and `gcd(p, q) = 1`.

use std::collections::BTreeMap;
use std::io::Write;

use anyhow::{bail, Context, Result};
use metriclat_core::kernels::MatroidRank;
use metriclat_core::lattice::{FiniteMetricLattice, LatticeTables};
use metriclat_core::rational::{fmt_rational, parse_rational};
use metriclat_core::Rational;
use serde::{Deserialize, Serialize};

use crate::verify::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub join: Vec<Vec<usize>>,
    pub d: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidJson {
    pub ground: usize,
    /// Subset bitmask (decimal) to rank.
    pub rank: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelJson {
    pub values: Vec<String>,
}

fn rationals(rows: &[String]) -> Result<Vec<Rational>> {
    rows.iter().map(|s| parse_rational(s).with_context(|| format!("bad rational {s:?}"))).collect()
}

impl LatticeJson {
    pub fn from_lattice(l: &FiniteMetricLattice) -> Self {
        let n = l.len();
        LatticeJson {
            elements: l.labels().to_vec(),
            join: (0..n).map(|x| (0..n).map(|y| l.join(x, y)).collect()).collect(),
            d: (0..n).map(|x| (0..n).map(|y| fmt_rational(&l.d(x, y))).collect()).collect(),
        }
    }

    pub fn tables(&self) -> Result<LatticeTables> {
        let metric = self.d.iter().map(|row| rationals(row)).collect::<Result<Vec<_>>>()?;
        Ok(LatticeTables::from_rows(self.elements.clone(), self.join.clone(), metric)?)
    }

    /// Validates the lattice and metric axioms.
    pub fn build(&self) -> Result<FiniteMetricLattice> {
        Ok(FiniteMetricLattice::build(self.tables()?)?)
    }
}

impl MatroidJson {
    pub fn from_rank(r: &MatroidRank) -> Self {
        MatroidJson {
            ground: r.ground(),
            rank: r.values().iter().enumerate().map(|(m, &v)| (m.to_string(), v)).collect(),
        }
    }

    pub fn rank(&self) -> Result<MatroidRank> {
        if self.ground >= usize::BITS as usize {
            bail!("ground set of size {} is too large", self.ground);
        }
        let size = 1usize << self.ground;
        let mut values = vec![None; size];
        for (k, &v) in &self.rank {
            let m: usize = k.parse().with_context(|| format!("bad subset bitmask {k:?}"))?;
            if m >= size {
                bail!("subset bitmask {m} outside a ground set of size {}", self.ground);
            }
            values[m] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(m, v)| v.with_context(|| format!("rank of subset {m} missing")))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatroidRank::new(self.ground, values)?)
    }
}

impl KernelJson {
    pub fn values(&self) -> Result<Vec<Rational>> {
        rationals(&self.values)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {path}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub const CSV_COLUMNS: [&str; 8] =
    ["check_id", "n", "instances", "max_violation", "witness", "status", "seed", "elapsed_ms"];

pub fn write_reports(reports: &[CheckReport], format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for r in reports {
                w.write_record([
                    r.check_id.clone(),
                    r.n.clone(),
                    r.instances.to_string(),
                    fmt_rational(&r.max_violation),
                    r.witness.clone(),
                    r.status.to_string(),
                    r.seed.to_string(),
                    r.elapsed_ms.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, reports)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Serde adapter writing a rational as `"p/q"`.
pub mod rational_str {
    use metriclat_core::rational::{fmt_rational, parse_rational};
    use metriclat_core::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use metriclat_core::kernels::graphic_rank;
    use metriclat_core::lattice::boolean_measure_lattice;

    #[test]
    fn lattice_round_trip() {
        let l = boolean_measure_lattice(&[Rational::from(1), Rational::from(2)]).unwrap();
        let j = LatticeJson::from_lattice(&l);
        assert_eq!(j.d[0][3], "1/1");
        let text = serde_json::to_string(&j).unwrap();
        let back: LatticeJson = serde_json::from_str(&text).unwrap();
        let rebuilt = back.build().unwrap();
        assert_eq!(LatticeJson::from_lattice(&rebuilt), j);
    }

    #[test]
    fn bad_lattice_is_rejected() {
        let j = LatticeJson {
            elements: vec!["0".into(), "1".into()],
            join: vec![vec![0, 1], vec![1, 1]],
            d: vec![vec!["0".into(), "1/2".into()], vec!["1/2".into(), "0".into()]],
        };
        assert!(j.build().is_err());
        let j = LatticeJson { d: vec![vec!["0".into(), "x".into()], vec!["1".into(), "0".into()]], ..j };
        assert!(j.tables().is_err());
    }

    #[test]
    fn matroid_round_trip() {
        let r = graphic_rank(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let j = MatroidJson::from_rank(&r);
        assert_eq!(j.rank["7"], 2);
        assert_eq!(j.rank().unwrap().values(), r.values());
        let mut missing = j.clone();
        missing.rank.remove("3");
        assert!(missing.rank().is_err());
    }
}
