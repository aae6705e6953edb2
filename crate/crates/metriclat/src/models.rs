//! Model specifiers: `pn:<n>`, `bool:<n>`, `nc:<n>`, `file:<path>` and
//! `flats:<path>`.

use std::sync::Arc;

use anyhow::{bail, Context, Result};
use metriclat_core::kernels::flats_lattice;
use metriclat_core::lattice::boolean_measure_lattice;
use metriclat_core::logic::Model;
use metriclat_core::partition::{noncrossing_lattice, PartitionLattice};
use metriclat_core::{FiniteMetricLattice, Rational};

use crate::io::{read_json, LatticeJson, MatroidJson};
use crate::sweep::partition_lattice;

/// A lattice loaded from a specifier.
pub enum LoadedModel {
    Partition(Arc<PartitionLattice>),
    Plain(FiniteMetricLattice),
}

impl LoadedModel {
    pub fn parse(spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').with_context(|| format!("model {spec:?} is not of the form kind:arg"))?;
        let size = || arg.parse::<usize>().with_context(|| format!("bad size in model {spec:?}"));
        Ok(match kind {
            "pn" => LoadedModel::Partition(partition_lattice(size()?)?),
            "bool" => LoadedModel::Plain(boolean_measure_lattice(&vec![Rational::from(1); size()?])?),
            // NC_n is not a metric lattice for n ≥ 4, so its tables are not validated.
            "nc" => LoadedModel::Plain(FiniteMetricLattice::build_unvalidated(noncrossing_lattice(size()?))?),
            "file" => LoadedModel::Plain(read_json::<LatticeJson>(arg)?.build()?),
            "flats" => LoadedModel::Plain(flats_lattice(&read_json::<MatroidJson>(arg)?.rank()?)?),
            _ => bail!("unknown model kind {kind:?}; expected pn, bool, nc, file or flats"),
        })
    }

    pub fn lattice(&self) -> &FiniteMetricLattice {
        match self {
            LoadedModel::Partition(p) => p.lattice(),
            LoadedModel::Plain(l) => l,
        }
    }

    pub fn model(&self) -> Model<'_> {
        match self {
            LoadedModel::Partition(p) => Model::partition(p),
            LoadedModel::Plain(l) => Model::new(l),
        }
    }
}
