"""
Basic tests for gevreyflow package
"""
import pytest


def test_import_gevreyflow():
    """Test that gevreyflow can be imported"""
    import gevreyflow
    assert gevreyflow is not None


def test_version_exists():
    """Test that version is available"""
    import gevreyflow
    assert hasattr(gevreyflow, '__version__')
    assert gevreyflow.__version__ is not None


def test_scipy_dependency():
    """Test that scipy is available (the quadrature dependency)"""
    try:
        from scipy.integrate import quad
        assert quad is not None
    except ImportError:
        pytest.fail("SciPy should be available as a dependency")


def test_public_names_resolve():
    """Every name in __all__ is importable from the package"""
    import gevreyflow
    for name in gevreyflow.__all__:
        assert hasattr(gevreyflow, name), name
