from .constant import ConstantBasis
from .featuremap import FeatureMap, dimension, features, features_batch
from .fit import collect_fit_samples, fit_basis, fit_centers
from .rbf import RbfBasis, load_basis, save_basis

__all__ = [
    "ConstantBasis",
    "FeatureMap",
    "RbfBasis",
    "collect_fit_samples",
    "dimension",
    "features",
    "features_batch",
    "fit_basis",
    "fit_centers",
    "load_basis",
    "save_basis",
]
