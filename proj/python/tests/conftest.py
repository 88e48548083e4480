import os

import pytest


@pytest.fixture(autouse=True, scope="session")
def _module_under_test():
    """Under ctest, make sure the build-tree module is the one imported."""
    expected = os.environ.get("SITELAB_PYTHON_PKG")
    if expected:
        import sitelab._sitelab as native

        if not os.path.abspath(native.__file__).startswith(os.path.abspath(expected)):
            pytest.exit(f"imported {native.__file__}, expected a module under {expected}; "
                        "an editable install shadows PYTHONPATH", returncode=1)
