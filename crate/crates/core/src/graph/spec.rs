use serde::{Deserialize, Serialize};

use super::{
    gen_pseudo_clique, gen_random_regular, Adjacency, CliqueChain, CompleteBipartite,
    CompleteGraph, ExplicitGraph, GraphView, PseudoClique, VertexId,
};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorFamily {
    Complete,
    CompleteBipartite,
    CliqueChain,
    RandomRegular,
    PseudoClique,
}

impl GeneratorFamily {
    pub const ALL: [GeneratorFamily; 5] = [
        GeneratorFamily::Complete,
        GeneratorFamily::CompleteBipartite,
        GeneratorFamily::CliqueChain,
        GeneratorFamily::RandomRegular,
        GeneratorFamily::PseudoClique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorFamily::Complete => "complete",
            GeneratorFamily::CompleteBipartite => "complete-bipartite",
            GeneratorFamily::CliqueChain => "clique-chain",
            GeneratorFamily::RandomRegular => "random-regular",
            GeneratorFamily::PseudoClique => "pseudo-clique",
        }
    }
}

/// Host graph recipe. `n` is used by random-regular, `m` by clique-chain,
/// `gamma` by pseudo-clique; `seed` by the randomized families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: GeneratorFamily,
    #[serde(default)]
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: GeneratorFamily, k: usize) -> Self {
        GeneratorSpec {
            family,
            k,
            n: None,
            m: None,
            gamma: None,
            seed: 0,
        }
    }

    pub fn build(&self) -> Result<Host> {
        let k = self.k;
        Ok(match self.family {
            GeneratorFamily::Complete => Host::Complete(CompleteGraph::new(k)?),
            GeneratorFamily::CompleteBipartite => Host::Bipartite(CompleteBipartite::new(k)?),
            GeneratorFamily::CliqueChain => {
                let m = self.m.ok_or_else(|| missing("m", self.family))?;
                Host::CliqueChain(CliqueChain::new(k, m)?)
            }
            GeneratorFamily::RandomRegular => {
                let n = self.n.ok_or_else(|| missing("n", self.family))?;
                Host::Explicit(gen_random_regular(k, n, self.seed)?)
            }
            GeneratorFamily::PseudoClique => Host::Pseudo(gen_pseudo_clique(
                k,
                self.gamma.unwrap_or(0.05),
                self.seed,
            )?),
        })
    }
}

fn missing(field: &str, family: GeneratorFamily) -> Error {
    Error::InvalidParameter(format!("{} requires parameter `{field}`", family.name()))
}

/// Any host graph, dispatching [`GraphView`] to the concrete representation.
#[derive(Clone, Debug)]
pub enum Host {
    Explicit(ExplicitGraph),
    Complete(CompleteGraph),
    Bipartite(CompleteBipartite),
    CliqueChain(CliqueChain),
    Pseudo(PseudoClique),
}

macro_rules! dispatch {
    ($self:ident, $g:ident => $e:expr) => {
        match $self {
            Host::Explicit($g) => $e,
            Host::Complete($g) => $e,
            Host::Bipartite($g) => $e,
            Host::CliqueChain($g) => $e,
            Host::Pseudo($g) => $e,
        }
    };
}

impl GraphView for Host {
    fn vertex_count(&self) -> usize {
        dispatch!(self, g => g.vertex_count())
    }
    fn degree(&self, v: VertexId) -> usize {
        dispatch!(self, g => g.degree(v))
    }
    fn adjacency(&self, v: VertexId) -> Adjacency<'_> {
        dispatch!(self, g => g.adjacency(v))
    }
    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        dispatch!(self, g => g.has_edge(u, v))
    }
    fn edge_count(&self) -> u64 {
        dispatch!(self, g => g.edge_count())
    }
    fn is_cofinite(&self) -> bool {
        dispatch!(self, g => g.is_cofinite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::min_degree;

    #[test]
    fn spec_json_round_trip_and_build() {
        let json = r#"{"family":"clique-chain","k":4,"m":3}"#;
        let spec: GeneratorSpec = serde_json::from_str(json).unwrap();
        let g = spec.build().unwrap();
        assert_eq!(g.vertex_count(), 13);
        assert_eq!(min_degree(&g), 4);
        let again: GeneratorSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn every_family_meets_min_degree() {
        for family in GeneratorFamily::ALL {
            let mut spec = GeneratorSpec::new(family, 20);
            spec.n = Some(60);
            spec.m = Some(3);
            spec.seed = 9;
            let g = spec.build().unwrap();
            assert!(min_degree(&g) >= 20, "{family:?}");
        }
    }

    #[test]
    fn missing_parameter() {
        assert!(GeneratorSpec::new(GeneratorFamily::RandomRegular, 3).build().is_err());
    }
}
