"""Neural-network regression of molten slag electrical conductivity.

Feed-forward model (one ReLU hidden layer, linear output) mapping
temperature and oxide composition to conductivity, with deterministic
training, min-max normalization, connection-weights sensitivity
analysis, and a command-line interface.
"""

from .data import (
    CSV_HEADER,
    FEATURE_COLUMNS,
    TARGET_COLUMN,
    Dataset,
    Sample,
    load_csv,
    remove_outliers,
    split,
    write_csv,
)
from .errors import (
    DataError,
    ModelFormatError,
    NumericError,
    RowError,
    SchemaError,
    SlagcondError,
)
from .estimator import ReluMLPRegressor
from .evaluation import EvalReport, aae, evaluate, rmse, stdev_of_deviation
from .model_io import ModelBundle, load_model, save_model
from .network import Network, check_min_width, forward, forward_batch, glorot_uniform_init
from .scaling import MinMaxRangeScaler
from .sensitivity import SensitivityReport, connection_weights
from .training import AdamState, TrainConfig, TrainResult, adam_step, backward, sweep, train

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "CSV_HEADER",
    "DataError",
    "Dataset",
    "EvalReport",
    "FEATURE_COLUMNS",
    "MinMaxRangeScaler",
    "ModelBundle",
    "ModelFormatError",
    "Network",
    "NumericError",
    "ReluMLPRegressor",
    "RowError",
    "Sample",
    "SchemaError",
    "SensitivityReport",
    "SlagcondError",
    "TARGET_COLUMN",
    "TrainConfig",
    "TrainResult",
    "aae",
    "adam_step",
    "backward",
    "check_min_width",
    "connection_weights",
    "evaluate",
    "forward",
    "forward_batch",
    "glorot_uniform_init",
    "load_csv",
    "load_model",
    "remove_outliers",
    "rmse",
    "save_model",
    "split",
    "stdev_of_deviation",
    "sweep",
    "train",
    "write_csv",
    "__version__",
]
