"""Interactive reinforced feature selection.

Per-feature Q-learning agents explore feature subsets while a mutual
information ranker and a decision-tree importance ranker advise the agents
that are about to drop a feature.
"""

from .baselines import run_marlfs
from .cart import TreeConfig, TreeModel
from .dataset_io import Dataset, SplitSpec, load_csv, split
from .env import AdviceSource, FeatureSelectionEnv, StepRecord
from .harness import RunConfig, RunReport, compare, run
from .qpolicy import LearnConfig, PolicyNetwork
from .stats import BinningSpec
from .trainers import Curriculum, TeachingSchedule, irfs_step, run_irfs

__version__ = "0.1.0"

__all__ = [
    "AdviceSource", "BinningSpec", "Curriculum", "Dataset", "FeatureSelectionEnv",
    "LearnConfig", "PolicyNetwork", "RunConfig", "RunReport", "SplitSpec", "StepRecord",
    "TeachingSchedule", "TreeConfig", "TreeModel", "compare", "irfs_step", "load_csv",
    "run", "run_irfs", "run_marlfs", "split",
]
