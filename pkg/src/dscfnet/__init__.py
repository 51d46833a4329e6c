"""Deep self-representative concept factorization (DSCF-Net) with baselines
and clustering evaluation protocols."""

from .baselines import CfConfig, cascade_cf_train, cf_train
from .clustering import clustering_accuracy, kmeans, pairwise_fscore
from .datasets import Dataset, generate_synthetic, load_dataset, save_dataset
from .export import export_heatmap
from .model import ModelConfig, TrainedModel, coefficient_matrix, train
from .protocols import (
    MethodSpec,
    MetricReport,
    NoiseSpec,
    corrupt_gaussian,
    grid_search,
    layer_sweep,
    noise_sweep,
    run_clustering_trial,
    run_protocol,
    sample_categories,
)

__version__ = "0.1.0"
