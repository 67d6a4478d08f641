"""
JSON file codec for spaces, maps, augmented spaces, rational sets and nest descriptors.

Every object is written as canonical JSON (sorted keys, two-space indent) so a
written file re-parses to an identical object.
"""
import json
import os
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from category import Arrow, AugmentedBallSpace, augment
from errors import BallSpaceError, SpaceFileError
from finite_core import FiniteBallSpace
from maps import BallMap
from symbolic import NestDescriptor, RationalSet

SUPPORTED_EXTENSIONS = {".json"}

SpaceObject = Union[FiniteBallSpace, AugmentedBallSpace, BallMap, RationalSet, NestDescriptor]


def is_supported_file_type(path: str) -> Tuple[bool, Optional[str]]:
    """
    Check if a file path has a supported extension.

    Returns:
        (is_valid, warning_message)
        - is_valid: True if the file is JSON
        - warning_message: Warning message if not supported, None if supported
    """
    _, ext = os.path.splitext(path)
    ext = ext.lower()

    if ext not in SUPPORTED_EXTENSIONS:
        warning = (
            f"WARNING: Unsupported file type '{ext}' for file '{os.path.basename(path)}'. "
            f"Only the following file types are supported: {', '.join(sorted(SUPPORTED_EXTENSIONS))}. "
            f"This file will be skipped."
        )
        return False, warning

    return True, None


def read_json(path: str) -> Any:
    """
    Parse a JSON file.

    Raises:
        SpaceFileError: If the file is missing, unreadable or not valid JSON (with line and column)
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise SpaceFileError(path, exc.msg, exc.lineno, exc.colno) from exc
    except OSError as exc:
        raise SpaceFileError(path, exc.strerror or str(exc)) from exc


def dumps(obj: Any) -> str:
    """Canonical JSON text of an object with to_json, or of plain JSON data."""
    payload = obj.to_json() if hasattr(obj, "to_json") else obj
    return json.dumps(payload, indent=2, sort_keys=True)


def write_json(path: str, obj: Any) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(obj) + "\n")
    return path


def object_from_json(payload: Any) -> SpaceObject:
    """
    Decode by shape: "kind" is a nest descriptor, "domain" a map, "intervals" a rational
    set, "augmented": true an augmented space, "n" with "balls" a ball space.
    """
    if not isinstance(payload, dict):
        raise BallSpaceError("expected a JSON object")
    if "kind" in payload:
        return NestDescriptor.from_json(payload)
    if "domain" in payload:
        return BallMap.from_json(payload)
    if "intervals" in payload:
        return RationalSet.from_json(payload)
    if payload.get("augmented") is True:
        return AugmentedBallSpace.from_json(payload)
    if "n" in payload and "balls" in payload:
        return FiniteBallSpace.from_json(payload)
    raise BallSpaceError(f"unrecognized object with keys {sorted(payload)}")


def _decode(path: str, decoder: Callable[[Any], Any], payload: Any) -> Any:
    try:
        return decoder(payload)
    except SpaceFileError:
        raise
    except (BallSpaceError, KeyError, TypeError, ValueError, AttributeError) as exc:
        raise SpaceFileError(path, str(exc)) from exc


def load_object(path: str) -> SpaceObject:
    return _decode(path, object_from_json, read_json(path))


def load_space(path: str) -> FiniteBallSpace:
    loaded = load_object(path)
    if not isinstance(loaded, FiniteBallSpace):
        raise SpaceFileError(path, f"expected a ball space, found {type(loaded).__name__}")
    return loaded


def _spaces(payload: Any) -> List[FiniteBallSpace]:
    if isinstance(payload, dict) and "spaces" in payload:
        return [FiniteBallSpace.from_json(item) for item in payload["spaces"]]
    return [FiniteBallSpace.from_json(payload)]


def load_spaces(path: str) -> List[FiniteBallSpace]:
    """A single space file, or a list file {"spaces": [<space>, ...]}."""
    return _decode(path, _spaces, read_json(path))


def spaces_to_json(spaces: List[FiniteBallSpace]) -> Dict[str, Any]:
    return {"spaces": [space.to_json() for space in spaces]}


def load_augmented(path: str) -> AugmentedBallSpace:
    """An augmented space file, or a plain space file which is augmented on load."""
    return _decode(path, _augmented_from_json, read_json(path))


def load_descriptor(path: str) -> NestDescriptor:
    return _decode(path, NestDescriptor.from_json, read_json(path))


def _quotient_input(data: Dict[str, Any]) -> Tuple[FiniteBallSpace, Tuple[int, ...], Optional[int]]:
    target = data.get("target_size")
    return (
        FiniteBallSpace.from_json(data["space"]),
        tuple(int(value) for value in data["table"]),
        None if target is None else int(target),
    )


def load_quotient_input(path: str) -> Tuple[FiniteBallSpace, Tuple[int, ...], Optional[int]]:
    """A quotient request: {"space": <space>, "table": [...], "target_size": optional int}."""
    return _decode(path, _quotient_input, read_json(path))


def _augmented_from_json(payload: Dict[str, Any]) -> AugmentedBallSpace:
    if payload.get("augmented") is True:
        return AugmentedBallSpace.from_json(payload)
    return augment(FiniteBallSpace.from_json(payload))


def _arrows(data: Dict[str, Any]) -> Tuple[int, List[Arrow]]:
    arrows: List[Arrow] = [
        (tuple(int(value) for value in item["table"]), _augmented_from_json(item["space"]))
        for item in data.get("arrows", [])
    ]
    return int(data["n"]), arrows


def load_arrows(path: str) -> Tuple[int, List[Arrow]]:
    """
    Sinks or sources for initial and final structures:
    {"n": size of the underlying set, "arrows": [{"table": [...], "space": <space>}, ...]}.
    Arrow spaces are read as augmented families.
    """
    return _decode(path, _arrows, read_json(path))


def arrows_to_json(universe_size: int, arrows: List[Arrow]) -> Dict[str, Any]:
    return {
        "n": universe_size,
        "arrows": [{"table": list(table), "space": space.to_json()} for table, space in arrows],
    }
