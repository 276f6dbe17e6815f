"""tracedoc: authoring toolkit for transparent, data-driven documents."""

__version__ = "0.1.0"
