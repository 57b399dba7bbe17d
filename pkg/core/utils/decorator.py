import functools
import time
from dataclasses import replace
from rich.console import Console
from rich.panel import Panel

from core.utils.errors import NonConvergent, ReliabilityError

console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NON_CONVERGENT = 4

# ------------------------------
# cli error decorator
# ------------------------------

def exit_on_error(error_msg):
    """Turn domain exceptions into the CLI exit codes, printing a red panel."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                result = func(*args, **kwargs)
                return EXIT_OK if result is None else result
            except NonConvergent as e:
                console.print(Panel(f"[bold red]{error_msg}:[/]\n{e}", border_style="red"))
                return EXIT_NON_CONVERGENT
            except (ReliabilityError, FileNotFoundError, KeyError) as e:
                console.print(Panel(f"[bold red]{error_msg}:[/]\n{e}", border_style="red"))
                return EXIT_DATA
            except ValueError as e:
                console.print(Panel(f"[bold red]{error_msg}:[/]\n{e}", border_style="red"))
                return EXIT_USAGE
        return wrapper
    return decorator

# ------------------------------
# estimator timing decorator
# ------------------------------

def timed_estimate(func):
    """Stamp the returned Estimate with the wall time of the call itself."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        estimate = func(*args, **kwargs)
        return replace(estimate, elapsed=time.perf_counter() - start)
    return wrapper

