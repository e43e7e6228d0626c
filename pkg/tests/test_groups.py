import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pkgroupoids.core.config import configure_settings
from pkgroupoids.core.exceptions import DescriptorError, GroupMismatchError, ResourceBoundError
from pkgroupoids.core.groups import (
    FiniteGroup,
    Permutation,
    TIElement,
    WreathElement,
    cyclic_group,
    extension_decompose,
    find_isomorphism,
    generated_subgroup,
    group_defect,
    is_homomorphism,
    symmetric_group,
    ti_extension,
    ti_group,
    verify_group_axioms,
    verify_wreath_multiplication,
    wreath_group,
    wreath_multiply,
)

ti_elements = st.builds(TIElement, st.integers(0, 11), st.integers(0, 1))


@given(ti_elements, ti_elements, st.integers(0, 11))
def test_ti_product_is_composition(x, y, pitch):
    assert (x * y)(pitch) == x(y(pitch))


def test_ti_group_enumeration():
    TI = ti_group()
    assert TI.order == 24
    assert TI.labels[:3] == ("T0", "T1", "T2")
    assert TI.labels[12] == "I0"
    assert verify_group_axioms(TI)


def test_ti_products_read_right_to_left():
    TI = ti_group()
    T2, I0 = TI.by_label("T2"), TI.by_label("I0")
    assert TI.label(TI.mul(T2, I0)) == "I2"
    assert TI.label(TI.mul(I0, T2)) == "I10"
    assert TI.label(TI.inv(TI.by_label("T5"))) == "T7"
    assert TI.label(TI.inv(TI.by_label("I5"))) == "I5"


def test_elements_of_other_groups_are_refused():
    with pytest.raises(GroupMismatchError):
        ti_group().own(cyclic_group(12).element(0))


def test_broken_table_is_located():
    broken = FiniteGroup(name="Broken", table=np.array([[0, 1], [1, 1]]))
    assert not verify_group_axioms(broken)
    assert group_defect(broken) == "1 has no two-sided inverse"


def test_table_entries_out_of_range():
    with pytest.raises(DescriptorError):
        FiniteGroup(name="Bad", table=np.array([[0, 2], [1, 0]]))


def test_group_order_cap():
    configure_settings(GROUP_ORDER_CAP=10)
    with pytest.raises(ResourceBoundError):
        wreath_group(cyclic_group(3), 2)


@pytest.mark.parametrize("n, order", [(1, 1), (2, 2), (3, 6), (4, 24)])
def test_symmetric_groups(n, order):
    S = symmetric_group(n)
    assert S.order == order
    assert verify_group_axioms(S)
    assert S.payloads[S.identity] == Permutation.identity(n)


@given(st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]))
def test_permutation_compose_applies_right_first(a, b):
    p, q = Permutation(tuple(a)), Permutation(tuple(b))
    assert all((p * q)(i) == p(q(i)) for i in range(1, 5))
    assert (p * p.inverse()).is_identity()


def test_permutation_rejects_non_bijection():
    with pytest.raises(DescriptorError):
        Permutation((1, 1, 3))


@pytest.mark.parametrize("base, n, order", [(3, 2, 18), (3, 3, 162), (2, 2, 8)])
def test_wreath_product_tables(base, n, order):
    Z = cyclic_group(base)
    W = wreath_group(Z, n)
    assert W.order == order
    assert verify_group_axioms(W)
    assert verify_wreath_multiplication(W, Z)


def test_wreath_rule_twists_by_right_permutation():
    Z = cyclic_group(3)
    e, one = Z.element(0), Z.element(1)
    swap = Permutation((2, 1))
    left = WreathElement((one, e), Permutation.identity(2))
    right = WreathElement((e, e), swap)
    product = wreath_multiply(Z, left, right)
    # m_{σ(1)} = m_2 = 0 lands in slot 1
    assert [Z.label(z) for z in product.vector] == ["0", "1"]
    assert product.sigma == swap


def test_ti_extension_decomposes_i5():
    E = ti_extension()
    z, h = extension_decompose(E, E.G.by_label("I5"))
    assert (z.index, h.index) == (7, 1)
    assert E.recompose(z, h) == E.G.by_label("I5")
    assert len(E.kernel) == 12


def test_transpositions_generate_kernel():
    TI = ti_group()
    span = generated_subgroup(TI, [TI.by_label("T1").index])
    assert span == ti_extension().kernel


def test_isomorphism_search():
    mapping = find_isomorphism(cyclic_group(6), cyclic_group(6))
    assert mapping is not None
    assert is_homomorphism(cyclic_group(6), cyclic_group(6), mapping)
    assert find_isomorphism(cyclic_group(6), symmetric_group(3)) is None
    assert find_isomorphism(cyclic_group(4), cyclic_group(5)) is None
