import json
import os

import pytest

from category import AugmentedBallSpace, augment
from errors import SpaceFileError
from finite_core import new_space
from maps import BallMap, identity
from space_io import (
    dumps,
    is_supported_file_type,
    load_arrows,
    load_augmented,
    load_descriptor,
    load_object,
    load_quotient_input,
    load_space,
    load_spaces,
    object_from_json,
    read_json,
    write_json,
)
from symbolic import NestDescriptor, RationalSet, build_example_ball, final_segments


def test_supported_file_types():
    assert is_supported_file_type("space.json") == (True, None)
    is_valid, warning = is_supported_file_type("notes.txt")
    assert not is_valid
    assert warning.startswith("WARNING: Unsupported file type '.txt'")


def test_malformed_json_reports_line_and_column(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "n": 2,\n  "balls": [[0]\n}\n')
    with pytest.raises(SpaceFileError) as excinfo:
        read_json(str(path))
    assert excinfo.value.line == 4
    assert str(excinfo.value).startswith(f"{path}:4:")


def test_missing_file(tmp_path):
    with pytest.raises(SpaceFileError):
        load_space(str(tmp_path / "absent.json"))


def test_invalid_space_is_wrapped(tmp_path):
    path = tmp_path / "empty_ball.json"
    path.write_text(json.dumps({"n": 2, "balls": [[]]}))
    with pytest.raises(SpaceFileError) as excinfo:
        load_space(str(path))
    assert excinfo.value.path == str(path)


def test_object_dispatch_by_shape(witness_space):
    assert object_from_json(witness_space.to_json()) == witness_space
    assert isinstance(object_from_json(augment(witness_space).to_json()), AugmentedBallSpace)
    assert isinstance(object_from_json(identity(witness_space).to_json()), BallMap)
    assert isinstance(object_from_json(build_example_ball(2).to_json()), RationalSet)
    assert object_from_json(final_segments().to_json()) == final_segments()


def test_write_then_load(tmp_path, witness_space):
    path = write_json(str(tmp_path / "nested" / "space.json"), witness_space)
    assert load_object(path) == witness_space
    with open(path, encoding="utf-8") as f:
        assert f.read() == dumps(witness_space) + "\n"


def test_load_space_rejects_other_objects(tmp_path):
    path = write_json(str(tmp_path / "nest.json"), final_segments())
    with pytest.raises(SpaceFileError):
        load_space(path)
    assert load_descriptor(path) == final_segments()


def test_load_spaces_single_and_list(corpus_dir):
    spaces = load_spaces(os.path.join(corpus_dir, "product_pair.json"))
    assert spaces == [new_space(2, [[0]]), new_space(2, [[1]])]
    assert load_spaces(os.path.join(corpus_dir, "witness_space.json")) == [new_space(3, [[0, 1], [1, 2]])]


def test_plain_spaces_are_augmented_on_load(tmp_path, witness_space):
    path = write_json(str(tmp_path / "space.json"), witness_space)
    assert load_augmented(path) == augment(witness_space)


def test_quotient_and_arrow_inputs(corpus_dir):
    space, table, target_size = load_quotient_input(os.path.join(corpus_dir, "quotient_input.json"))
    assert space == new_space(4, [[0, 1], [2, 3], [0, 1, 2, 3]])
    assert table == (0, 0, 1, 1) and target_size == 2
    universe_size, arrows = load_arrows(os.path.join(corpus_dir, "final_sources.json"))
    assert universe_size == 2
    assert [table for table, _ in arrows] == [(0,), (1,)]
    assert all(space == augment(new_space(1, [[0]])) for _, space in arrows)


def test_descriptor_errors_are_wrapped(tmp_path):
    path = tmp_path / "bad_nest.json"
    path.write_text(json.dumps({"kind": "Omega1"}))
    with pytest.raises(SpaceFileError):
        load_descriptor(str(path))
    assert NestDescriptor.from_json({"kind": "FinalSegments"}) == final_segments()
