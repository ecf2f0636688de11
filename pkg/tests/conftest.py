import pytest

from backend.asymptotics import MgfProfile
from backend.model import Ar1, Geometric, IidGaussian, QcdModel
from backend.sis import IidLlr, MarkovLlr, SisKind, SisSpec

MU1 = 0.5
RHO_A = 0.02


@pytest.fixture
def model1a() -> QcdModel:
    return QcdModel(IidGaussian(0.0, 1.0), IidGaussian(MU1, 1.0), Geometric(RHO_A), 27.0)


@pytest.fixture
def llr1a() -> IidLlr:
    return IidLlr(IidGaussian(0.0, 1.0), IidGaussian(MU1, 1.0))


@pytest.fixture
def sis1a(llr1a) -> SisSpec:
    return SisSpec.of((SisKind.CUSUM, llr1a.with_shift(RHO_A)))


@pytest.fixture
def profile1a(model1a, llr1a) -> MgfProfile:
    return MgfProfile(llr1a.with_shift(RHO_A), model1a.pre, model1a.post, RHO_A)


@pytest.fixture
def model2a() -> QcdModel:
    return QcdModel(Ar1(0.8, 1.0), Ar1(0.5, 1.0), Geometric(RHO_A), 27.0)


@pytest.fixture
def sis2a() -> SisSpec:
    return SisSpec.of((SisKind.CUSUM, MarkovLlr(Ar1(0.8, 1.0), Ar1(0.5, 1.0), RHO_A)))
