"""betti_regions.config"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import ruamel.yaml

from betti_regions.exceptions import InputDocumentError
from betti_regions.logging import logger

YAML = ruamel.yaml.YAML(typ="safe", pure=True)

THREADS_ENV_VAR = "BETTI_REGIONS_THREADS"


@dataclass(frozen=True)
class Settings:
    # simplicial complexes with more vertices than this are refused rather than computed
    homology_vertex_bound: int = 20
    # the taylor complex has 2^g terms, so keep g small
    taylor_generator_bound: int = 12
    # max number of distinct lcms collected while building the join closure of the generators
    lcm_lattice_bound: int = 20000
    ratliff_rush_horizon: int = 10
    # detect_regions doubles the period D up to this value before giving up
    period_cap: int = 64
    max_regions: int = 6
    # interpolation keeps adding points past full rank so every fit is overdetermined
    extra_fit_points: int = 2
    threads: int = 1

    def to_dict(self) -> Dict[str, Any]:
        """
        Dump settings to a plain dict

        Args:
            N/A

        Returns:
            dict: settings fields

        Raises:
            N/A

        """
        return asdict(self)


DEFAULT_SETTINGS = Settings()


def _apply_environment(settings: Settings) -> Settings:
    threads = os.environ.get(THREADS_ENV_VAR)
    if not threads:
        return settings

    try:
        thread_count = int(threads)
    except ValueError as exc:
        msg = f"{THREADS_ENV_VAR} must be an integer, got {threads!r}"
        logger.critical(msg)
        raise InputDocumentError(msg) from exc

    if thread_count < 1:
        msg = f"{THREADS_ENV_VAR} must be positive, got {thread_count}"
        logger.critical(msg)
        raise InputDocumentError(msg)

    return replace(settings, threads=thread_count)


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Load settings from an (optional) yaml/json file, overlaying the defaults

    Args:
        path: path to a yaml or json mapping of settings fields; None for defaults only

    Returns:
        Settings: the loaded settings, with the thread count env var applied last

    Raises:
        InputDocumentError: if the file is unreadable, not a mapping or holds bad keys or values

    """
    settings = DEFAULT_SETTINGS

    if path is not None:
        logger.debug(f"loading settings from {path}")
        try:
            with open(path, "r", encoding="utf-8") as f:
                loaded = YAML.load(f) or {}
        except (OSError, UnicodeDecodeError, ruamel.yaml.YAMLError) as exc:
            msg = f"settings file {path} is not readable: {exc}"
            logger.critical(msg)
            raise InputDocumentError(msg, witness=str(path)) from exc

        if not isinstance(loaded, dict):
            msg = f"settings file {path} must contain a mapping"
            logger.critical(msg)
            raise InputDocumentError(msg)

        known = {field.name for field in fields(Settings)}
        unknown = sorted(set(loaded) - known)
        if unknown:
            msg = f"unknown settings keys: {', '.join(unknown)}"
            logger.critical(msg)
            raise InputDocumentError(msg, witness=unknown)

        for key, value in loaded.items():
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                msg = f"setting {key!r} must be a positive integer, got {value!r}"
                logger.critical(msg)
                raise InputDocumentError(msg, witness=key)

        settings = replace(settings, **loaded)

    return _apply_environment(settings)


def resolve_settings(settings: Optional[Settings]) -> Settings:
    """
    Return the given settings or the (environment adjusted) defaults

    Args:
        settings: settings object or None

    Returns:
        Settings: settings to use

    Raises:
        N/A

    """
    if settings is not None:
        return settings
    return _apply_environment(DEFAULT_SETTINGS)


def parallel_map(
    function: Callable[[Any], Any], items: Sequence[Any], settings: Settings
) -> List[Any]:
    """
    Map a function over independent items, on worker threads when configured

    Args:
        function: function of one item
        items: items to map over
        settings: settings holding the thread count

    Returns:
        list: results in input order

    Raises:
        N/A

    """
    if settings.threads <= 1 or len(items) < 2:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        return list(executor.map(function, items))
