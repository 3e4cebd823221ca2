import pytest

from polycenters.classes import SECTION5_CLASSES
from polycenters.reproduce import run_class_analysis


@pytest.fixture(scope="session")
def class_analyses():
    """Multiplicity analyses of the six quartic classes, computed once."""
    out = {}
    for key, builder in SECTION5_CLASSES.items():
        cdef = builder()
        out[key] = (cdef, run_class_analysis(cdef))
    return out
