"""Link-trace network sampling: strategies, representativeness metrics, experiments."""

from .community import Partition, detect_cnm, detect_rak, modularity
from .graph import Graph, induced_subgraph, largest_component, load_edge_list, neighborhood, read_graph
from .harness import ExperimentConfig, aggregate, run_experiment
from .samplers import STRATEGIES, Sample, SamplerConfig, sample
from .synth import gen_chung_lu, gen_planted_partition, power_law_weights

__all__ = [
    "ExperimentConfig",
    "Graph",
    "Partition",
    "STRATEGIES",
    "Sample",
    "SamplerConfig",
    "aggregate",
    "detect_cnm",
    "detect_rak",
    "gen_chung_lu",
    "gen_planted_partition",
    "induced_subgraph",
    "largest_component",
    "load_edge_list",
    "modularity",
    "neighborhood",
    "power_law_weights",
    "read_graph",
    "run_experiment",
    "sample",
]
