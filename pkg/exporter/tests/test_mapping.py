import pytest

from eegnext_export.mapping import (
    UnmappedTensor,
    build_mapping,
    canonical_order,
    check_canonical_coverage,
    check_source_coverage,
    layer_scale_names,
    skip_list,
)


def test_mapping_covers_real_state_dict(random_state):
    check_source_coverage(set(random_state.keys()))


def test_unknown_source_tensor_rejected(random_state):
    names = set(random_state.keys()) | {"features.9.0.mystery"}
    with pytest.raises(UnmappedTensor):
        check_source_coverage(names)


def test_canonical_names_unique_and_complete():
    order = canonical_order()
    assert len(order) == len(set(order))
    # 4 (patchify+ln0) + 3*4 (ln/down pairs) + 18 blocks * 8 + 2 (ln4)
    assert len(order) == 4 + 12 + 18 * 8 + 2
    mapping = build_mapping()
    assert set(mapping.values()) == set(order)
    check_canonical_coverage(set(order))


def test_canonical_coverage_rejects_gaps():
    order = canonical_order()
    with pytest.raises(UnmappedTensor):
        check_canonical_coverage(set(order[:-1]))
    with pytest.raises(UnmappedTensor):
        check_canonical_coverage(set(order) | {"rogue.w"})


def test_skip_list_contents():
    skipped = skip_list()
    assert "classifier.2.weight" in skipped and "classifier.2.bias" in skipped
    assert len(layer_scale_names()) == 18
    assert all(n.endswith("layer_scale") for n in layer_scale_names())
