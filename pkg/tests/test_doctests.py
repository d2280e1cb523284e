import doctest
import importlib

import pytest

from itnforge.grammar import default_grammar
from itnforge.text import Token


@pytest.mark.parametrize("name", ["itnforge.align", "itnforge.datagen", "itnforge.metrics", "itnforge.tn"])
def test_docstring_examples(name):
    module = importlib.import_module(name)
    result = doctest.testmod(module, extraglobs={"default_grammar": default_grammar, "Token": Token},
                             optionflags=doctest.NORMALIZE_WHITESPACE)
    assert result.failed == 0 and result.attempted > 0
