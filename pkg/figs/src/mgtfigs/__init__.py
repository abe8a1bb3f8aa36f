"""Figure rendering for mgtfourier CSV scans."""

from .render import (
    SCHEMAS,
    FigureSpec,
    SchemaError,
    decay_markers,
    main,
    read_scan,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "SCHEMAS",
    "FigureSpec",
    "SchemaError",
    "decay_markers",
    "main",
    "read_scan",
    "render",
]
