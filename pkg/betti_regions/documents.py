"""betti_regions.documents"""

import csv
import json
from io import StringIO
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

import ruamel.yaml

from betti_regions.exceptions import InputDocumentError
from betti_regions.logging import logger

YAML = ruamel.yaml.YAML(typ="safe", pure=True)


def load_document(path: Union[str, Path]) -> Any:
    """
    Load a yaml or json input document

    Json is a subset of yaml, so the ruamel safe loader handles both file flavors

    Args:
        path: path to the document

    Returns:
        Any: the loaded document

    Raises:
        InputDocumentError: if the file does not exist, is not readable or does not parse

    """
    logger.debug(f"loading document {path}")

    try:
        with open(path, "r", encoding="utf-8") as f:
            return YAML.load(f)
    except FileNotFoundError as exc:
        msg = f"input document {path} does not exist"
        logger.critical(msg)
        raise InputDocumentError(msg, witness=str(path)) from exc
    except ruamel.yaml.YAMLError as exc:
        msg = f"input document {path} is not valid yaml/json: {exc}"
        logger.critical(msg)
        raise InputDocumentError(msg, witness=str(path)) from exc
    except (OSError, UnicodeDecodeError) as exc:
        msg = f"input document {path} is not readable: {exc}"
        logger.critical(msg)
        raise InputDocumentError(msg, witness=str(path)) from exc


def parse_integer(value: Any, what: str = "value") -> int:
    """
    Parse a decimal string (or plain int) into an int

    Args:
        value: decimal string or int
        what: name of the thing being parsed, used in error messages

    Returns:
        int: parsed integer

    Raises:
        InputDocumentError: if value is not an integer or decimal string

    """
    if isinstance(value, bool):
        raise InputDocumentError(f"{what} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError as exc:
            raise InputDocumentError(f"{what} must be a decimal string, got {value!r}") from exc
    raise InputDocumentError(f"{what} must be an integer, got {value!r}")


def parse_integer_list(value: Any, what: str = "vector") -> List[int]:
    """
    Parse a list of decimal strings/ints, or a comma separated string, into ints

    Args:
        value: list or comma separated string
        what: name of the thing being parsed, used in error messages

    Returns:
        list: parsed integers

    Raises:
        InputDocumentError: if value is not a list or comma separated string of integers

    """
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, (list, tuple)):
        raise InputDocumentError(f"{what} must be a list of integers, got {value!r}")
    return [parse_integer(element, what=what) for element in value]


def require_keys(document: Any, keys: Sequence[str], what: str) -> None:
    """
    Assert an input document is a mapping holding the given keys

    Args:
        document: loaded document
        keys: required keys
        what: document kind, used in error messages

    Returns:
        None

    Raises:
        InputDocumentError: if the document is not a mapping or a key is missing

    """
    if not isinstance(document, dict):
        raise InputDocumentError(f"{what} document must be a mapping")
    missing = [key for key in keys if key not in document]
    if missing:
        raise InputDocumentError(f"{what} document missing keys: {', '.join(missing)}", missing)


def dump_json(payload: Any) -> str:
    """
    Dump a payload to json; key order is kept as built so output is byte-stable across runs

    Args:
        payload: json-able object

    Returns:
        str: json text w/ trailing newline

    Raises:
        N/A

    """
    return json.dumps(payload, indent=2) + "\n"


def dump_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Dump rows to csv text

    Args:
        header: column names
        rows: row values

    Returns:
        str: csv text

    Raises:
        N/A

    """
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([str(value) for value in row])
    return buffer.getvalue()


def write_output(text: str, path: Optional[Union[str, Path]] = None) -> None:
    """
    Write output text to a file, or stdout if no path given

    Args:
        text: text to write
        path: output path or None

    Returns:
        None

    Raises:
        InputDocumentError: if the output path is not writable

    """
    if path is None:
        print(text, end="")
        return

    logger.debug(f"writing output to {path}")
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as exc:
        msg = f"output path {path} is not writable: {exc.strerror}"
        logger.critical(msg)
        raise InputDocumentError(msg, witness=str(path)) from exc
