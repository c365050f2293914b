import functools

import pytest
from hypothesis import settings

from cordage import gadgets, solver

settings.register_profile("cordage", deadline=None, derandomize=True, max_examples=40)
settings.load_profile("cordage")


CATALOG = {
    "y": gadgets.y_network,
    "clothesline": gadgets.clothesline,
    "adder": gadgets.adder,
    "scaler": lambda: gadgets.scaler(0.5),
    "cartesian2d": gadgets.cartesian2d,
    "cartesian3d": gadgets.cartesian3d,
    "higher-mobility": gadgets.higher_mobility_example,
    "ellipse": gadgets.gardeners_ellipse,
    "compass": gadgets.string_compass,
    "vesica": gadgets.vesica,
    "varying-dimension": gadgets.varying_dimension,
}

TAUT = ("y", "clothesline", "adder", "scaler", "cartesian2d", "cartesian3d", "higher-mobility")
NOT_TAUT = ("ellipse", "compass", "vesica", "varying-dimension")


@functools.lru_cache(maxsize=None)
def taut_report_of(name: str) -> solver.TautReport:
    """Taut reports are the slowest thing here; share them across test modules."""
    return solver.taut_report(CATALOG[name]())


@pytest.fixture
def catalog():
    return CATALOG


@functools.lru_cache(maxsize=None)
def linear_model_of(name: str):
    from cordage.taut import build_linear_model

    return build_linear_model(CATALOG[name](), check_taut=False)
