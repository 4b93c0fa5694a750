"""Debug utilities for sinkchase.

Debug output is enabled per component through the ``DEBUG`` environment
variable, e.g. ``DEBUG=engine,policy`` or ``DEBUG=all``.
"""
import os
from typing import Any, Optional

from rich.console import Console
from rich.markup import escape

_console = Console(stderr=True, highlight=False)


def is_debug_enabled(component: Optional[str] = None) -> bool:
    """Check if debug is enabled for a component.

    Args:
        component: Optional component name to check. If None, checks if any debug is enabled.

    Returns:
        bool: True if debug is enabled for the component or any component if component is None
    """
    debug_env = os.getenv('DEBUG', '').lower()
    if not debug_env:
        return False

    components = [c.strip() for c in debug_env.split(',')]
    return not component or 'all' in components or component in components


def debug_print(component: str, *args: Any, **kwargs: Any) -> None:
    """Print a debug message to stderr if debug is enabled for component.

    Args:
        component: Component name to check debug status for
        *args: Objects to print
        **kwargs: Keyword arguments passed on to ``Console.print``
    """
    if is_debug_enabled(component):
        prefix = escape(f"[DEBUG {component.upper()}]")
        args = tuple(escape(a) if isinstance(a, str) else a for a in args)
        _console.print(f"[dim]{prefix}[/dim]", *args, soft_wrap=True, **kwargs)
