import doctest
import importlib

import pytest

MODULES = ["dicke_atlas.model", "dicke_atlas.landscape", "dicke_atlas.analytic", "dicke_atlas.oracle",
           "dicke_atlas.phases", "dicke_atlas.symmetry", "dicke_atlas.exact", "dicke_atlas.cli"]


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    result = doctest.testmod(importlib.import_module(name))
    assert result.failed == 0
