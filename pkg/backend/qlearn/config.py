from dataclasses import dataclass, field
from typing import Optional

from utils.error import ConfigValueError


@dataclass(frozen=True)
class ZapConfig:
    enabled: bool = True
    beta0: float = 1.0
    beta_rho: float = 0.85
    ridge: float = 1e-6

    def __post_init__(self) -> None:
        if not self.ridge > 0:
            raise ConfigValueError("train.zap.ridge", "must be positive")
        if not self.beta0 > 0:
            raise ConfigValueError("train.zap.beta0", "must be positive")
        if not 0.5 < self.beta_rho <= 1.0:
            raise ConfigValueError("train.zap.beta_rho", "must lie in (0.5, 1]")


@dataclass(frozen=True)
class TrainConfig:
    n_regens: int
    kappa: float
    seed: int
    alpha0: float = 1.0
    # None picks 1 (alpha_n = min(alpha0, 1/n)) with Zap and 0.85 without
    rho: Optional[float] = None
    gamma: float = 1.0
    eta: float = 30.0
    explore_p: float = 0.5
    reset_bound: float = 5e3
    theta0_range: float = 50.0
    zap: ZapConfig = field(default_factory=ZapConfig)
    averaging: bool = True
    episode_cap: int = 10**6
    log_points: int = 10**4

    def __post_init__(self) -> None:
        if self.n_regens < 0:
            raise ConfigValueError("train.n_regens", "must be non-negative")
        if not self.kappa > 0:
            raise ConfigValueError("train.kappa", "must be positive")
        if not self.alpha0 > 0:
            raise ConfigValueError("train.alpha0", "must be positive")
        if not 0.5 < self.step_exponent <= 1.0:
            raise ConfigValueError("train.rho", "must lie in (0.5, 1]")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigValueError("train.gamma", "must lie in [0, 1]")
        if not self.eta > 0:
            raise ConfigValueError("train.eta", "must be positive")
        if not 0.0 < self.explore_p < 1.0:
            raise ConfigValueError("train.explore_p", "must lie in (0, 1)")
        if not self.reset_bound > self.theta0_range > 0:
            raise ConfigValueError("train.reset_bound", "must exceed the initial range")
        if self.episode_cap < 1:
            raise ConfigValueError("train.episode_cap", "must be at least 1")

    @property
    def step_exponent(self) -> float:
        if self.rho is not None:
            return self.rho
        return 1.0 if self.zap.enabled else 0.85

    def alpha(self, n: int) -> float:
        return min(self.alpha0, n ** -self.step_exponent)

    def beta(self, n: int) -> float:
        return min(self.zap.beta0, n ** -self.zap.beta_rho)
