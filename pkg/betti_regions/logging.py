"""betti_regions.logging"""

# slightly irritating renaming to prevent a cyclic lookup in griffe for mkdocstrings
from logging import Formatter as Formatter_
from logging import LogRecord as LogRecord_
from logging import NullHandler, StreamHandler, getLogger
from typing import List, Optional, Tuple, Union

# (record attribute, header title, width)
Column = Tuple[str, str, int]

BASE_COLUMNS: Tuple[Column, ...] = (
    ("message_id", "ID", 5),
    ("asctime", "TIMESTAMP", 23),
    ("levelname", "LEVEL", 8),
)
CONTEXT_COLUMN: Column = ("context", "SUBCOMMAND", 12)
CALLER_COLUMNS: Tuple[Column, ...] = (
    ("module", "MODULE", 20),
    ("funcName", "FUNCNAME", 20),
    ("lineno", "LINE", 5),
)
TRUNCATED_COLUMNS = ("context", "module", "funcName")


class BettiRegionsFormatter(Formatter_):
    def __init__(
        self, log_header: bool = True, caller_info: bool = False, context: Optional[str] = None
    ) -> None:
        """
        Betti Regions Formatter

        Emit numbered, aligned log messages, optionally tagged w/ the running subcommand

        Args:
            log_header: print log header or not
            caller_info: print caller info or not (like module/function/lineno)
            context: subcommand (or other run context) shown in its own column

        Returns:
            None

        Raises:
            N/A

        """
        columns: List[Column] = list(BASE_COLUMNS)
        if context is not None:
            columns.append(CONTEXT_COLUMN)
        if caller_info:
            columns.extend(CALLER_COLUMNS)

        log_format = " | ".join(f"{{{name}:<{width}}}" for name, _, width in columns)
        super().__init__(fmt=log_format + " | {message}", style="{")

        self.columns = columns
        self.header = " | ".join(title.ljust(width) for _, title, width in columns) + " | MESSAGE"
        self.log_header = log_header
        self.context = context
        self.message_id = 1

    def _truncate(self, value: str, width: int) -> str:
        return value if len(value) <= width else f"{value[: width - 3]}..."

    def formatMessage(self, record: LogRecord_) -> str:
        """
        Override standard library logging Formatter.formatMessage

        Args:
            record: LogRecord to format

        Returns:
            str: log string to emit

        Raises:
            N/A

        """
        record.message_id = self.message_id
        record.context = self.context

        for name, _, width in self.columns:
            if name in TRUNCATED_COLUMNS:
                setattr(record, name, self._truncate(getattr(record, name), width))

        message = self._style.format(record)
        if self.message_id == 1 and self.log_header:
            message = self.header + "\n" + message

        self.message_id += 1
        return message


def enable_logging(
    level: Union[int, str] = "INFO", caller_info: bool = False, context: Optional[str] = None
) -> StreamHandler:
    """
    Attach a stderr handler w/ the betti regions formatter to the package logger

    Args:
        level: logging level name or number
        caller_info: include module/function/line columns
        context: subcommand shown in every message

    Returns:
        StreamHandler: the attached handler (so callers can remove it again)

    Raises:
        N/A

    """
    handler = StreamHandler()
    handler.setFormatter(BettiRegionsFormatter(caller_info=caller_info, context=context))
    logger.addHandler(handler)
    logger.setLevel(level.upper() if isinstance(level, str) else level)
    return handler


logger = getLogger("betti_regions")
logger.addHandler(NullHandler())
