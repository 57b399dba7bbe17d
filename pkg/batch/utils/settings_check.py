from rich.console import Console
from rich.panel import Panel

from core.utils.models import ESTIMATOR_NAMES

console = Console(stderr=True)

POSITIVE_SETTINGS = ['start_k', 'step', 'max_steps', 'max_workers']


def check_bench_settings(estimators, workload, repeats=None, rho_threshold=None, **counts):
    """Report every bad benchmark setting in one go; True when all pass."""
    all_passed = True

    unknown = [name for name in estimators if name not in ESTIMATOR_NAMES]
    if unknown:
        console.print(Panel("\n".join(f"- {name}" for name in unknown),
                            title="[bold red]Unknown estimators", expand=False))
        all_passed = False

    if len(workload) == 0:
        console.print(Panel("The workload has no pairs", title="[bold red]Error in workload", expand=False))
        all_passed = False
    for i, pair in enumerate(workload.pairs):
        if pair[0] == pair[1]:
            console.print(Panel(f"Source equals target 「{pair[0]}」", title=f"[bold red]Error in pair {i + 1}", expand=False))
            all_passed = False

    if repeats is not None and int(repeats) < 2:
        console.print(Panel(f"Invalid repeats value 「{repeats}」, need at least 2", title="[bold red]Error in settings", expand=False))
        all_passed = False
    if rho_threshold is not None and not float(rho_threshold) > 0:
        console.print(Panel(f"Invalid rho threshold 「{rho_threshold}」", title="[bold red]Error in settings", expand=False))
        all_passed = False
    for key in POSITIVE_SETTINGS:
        value = counts.get(key)
        if value is not None and int(value) < 1:
            console.print(Panel(f"Invalid {key} value 「{value}」", title="[bold red]Error in settings", expand=False))
            all_passed = False

    if all_passed:
        console.print(Panel(f"✅ All settings passed the check!\nDetected {len(workload)} pairs and {len(estimators)} estimators.",
                            title="[bold green]Success", expand=False))
    return all_passed
