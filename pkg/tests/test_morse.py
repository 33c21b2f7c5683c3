import pytest

from warpcurv.errors import BadCodim, NotAspherical
from warpcurv.morse import (CountablyInfinite, StratumData, handle_decomposition, homotopy_type,
                            is_aspherical, kernel_rank)


@pytest.mark.parametrize("codims,handles", [([2, 2, 2], {1: 3}), ([2, 3], {1: 1, 2: 1}), ([], {})])
def test_handles(codims, handles):
    assert handle_decomposition(StratumData(codims)) == handles


def test_asphericity_and_rank():
    assert is_aspherical(StratumData([2, 2])) and not is_aspherical(StratumData([2, 3]))
    assert is_aspherical(StratumData([]))
    assert kernel_rank(StratumData([2, 2, 2])) == 3 and kernel_rank(StratumData([2])) == 1
    assert kernel_rank(StratumData([2], countable=True)) is CountablyInfinite
    with pytest.raises(NotAspherical):
        kernel_rank(StratumData([3]))


def test_homotopy_type():
    assert homotopy_type(StratumData([2, 2])) == [1, 1]
    assert homotopy_type(StratumData([4])) == [3]
    assert homotopy_type(StratumData([])) == []


def test_bad_codim():
    with pytest.raises(BadCodim):
        handle_decomposition(StratumData([1]))
