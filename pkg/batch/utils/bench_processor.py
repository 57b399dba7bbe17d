import os
import time
import tempfile
import concurrent.futures
from dataclasses import dataclass, field
import numpy as np
import pandas as pd
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from batch.utils.settings_check import check_bench_settings
from core.estimator_backend import (build_fwd_index, build_index, get_estimator, load_index,
                                    load_probtree, refresh_index, save_index, save_probtree)
from core.utils.config_utils import load_key
from core.utils.errors import NonConvergent, ReliabilityError, ZeroBaseline
from core.utils.models import *

console = Console(stderr=True)

# ------------
# reports
# ------------

@dataclass
class ConvergenceReport:
    estimator: str
    rows: list = field(default_factory=list)
    converged_k: int = None
    converged_at_zero: bool = False
    # K -> per-pair mean estimate at that K
    pair_means: dict = field(default_factory=dict)

    @property
    def final_means(self):
        return self.pair_means[self.converged_k]

    def to_frame(self):
        return pd.DataFrame(self.rows, columns=CONVERGENCE_COLUMNS)

# ------------
# variance of one pair
# ------------

def _repeat(estimator, pair, K, T, rng):
    s, t = pair[0], pair[1]
    values = np.empty(T)
    elapsed = 0.0
    for j in range(T):
        estimate = estimator(s, t, K, rng.split(j))
        values[j] = estimate.value
        elapsed += estimate.elapsed
    return values, elapsed


def estimate_variance(estimator, graph, pair, K, T=None, rng=None, **options):
    """Sample mean and unbiased variance of T independent runs on one pair.

    ``estimator`` is an estimator name or an already bound ``(s, t, K, rng)`` callable.
    """
    T = int(load_key('bench.repeats')) if T is None else int(T)
    if T < 2:
        raise ValueError("need at least two repeats for a variance")
    if isinstance(estimator, str):
        estimator = get_estimator(estimator, graph, **options)
    values, _ = _repeat(estimator, pair, K, T, rng)
    return float(values.mean()), float(values.var(ddof=1))

# ------------
# convergence protocol
# ------------

def _run_pairs(estimator, workload, K, T, rng, max_workers):
    """Per-pair (values, elapsed), in workload order."""
    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = {executor.submit(_repeat, estimator, pair, K, T, rng.split(i)): i
                   for i, pair in enumerate(workload.pairs)}
        results = [None] * len(futures)
        for future in concurrent.futures.as_completed(futures):
            results[futures[future]] = future.result()
    return results


def run_convergence(name, graph, workload, start_k=None, step=None, rho_threshold=None, repeats=None,
                    max_steps=None, max_workers=None, rng=None, estimator=None, progress=None, **options):
    """Grow K by ``step`` until V_K / R_K drops below ``rho_threshold``.

    V_K and R_K are averaged over the workload pairs before dividing. A workload
    whose runs are all zero on two K steps in a row counts as converged at zero.
    """
    start_k = int(load_key('bench.start_k')) if start_k is None else int(start_k)
    step = int(load_key('bench.step')) if step is None else int(step)
    rho_threshold = float(load_key('bench.rho_threshold')) if rho_threshold is None else float(rho_threshold)
    repeats = int(load_key('bench.repeats')) if repeats is None else int(repeats)
    max_steps = int(load_key('bench.max_steps')) if max_steps is None else int(max_steps)
    max_workers = int(load_key('bench.max_workers')) if max_workers is None else int(max_workers)
    if repeats < 2:
        raise ValueError("need at least two repeats for a variance")
    if name == 'bfs-sharing':
        # refresh and query share one index
        max_workers = 1
        options.setdefault('refresh', True)
    estimator = estimator or get_estimator(name, graph, **options)

    report = ConvergenceReport(estimator=name)
    zero_steps = 0
    rho = float('nan')
    task = progress.add_task(f"[cyan]{name}", total=max_steps) if progress is not None else None
    for step_idx in range(max_steps):
        K = start_k + step_idx * step
        results = _run_pairs(estimator, workload, K, repeats, rng.split(step_idx), max_workers)
        means = [float(values.mean()) for values, _ in results]
        variances = [float(values.var(ddof=1)) for values, _ in results]
        seconds = sum(elapsed for _, elapsed in results)
        R_K, V_K = float(np.mean(means)), float(np.mean(variances))
        rho = V_K / R_K if R_K > 0 else float('nan')
        report.pair_means[K] = means
        report.rows.append({
            'estimator': name, 'K': K, 'R_K': R_K, 'V_K': V_K, 'rho': rho, 'seconds': seconds,
            'ms_per_sample': 1000.0 * seconds / (K * repeats * len(workload)),
        })
        if task is not None:
            progress.update(task, advance=1, description=f"[cyan]{name}[/] K={K} rho={rho:.3g}")

        all_zero = all(not values.any() for values, _ in results)
        zero_steps = zero_steps + 1 if all_zero else 0
        if zero_steps >= 2:
            report.converged_k, report.converged_at_zero = K, True
            return report
        if R_K > 0 and rho < rho_threshold:
            report.converged_k = K
            return report
    raise NonConvergent(name, start_k + (max_steps - 1) * step, rho)

# ------------
# accuracy
# ------------

def relative_error(estimates, baseline):
    """Mean of |est - base| / base over pairs."""
    estimates = np.asarray(estimates, dtype=np.float64)
    baseline = np.asarray(baseline, dtype=np.float64)
    if estimates.shape != baseline.shape:
        raise ValueError("estimates and baseline cover different pairs")
    zero = np.flatnonzero(baseline <= 0.0)
    if len(zero):
        raise ZeroBaseline(zero.tolist())
    return float(np.mean(np.abs(estimates - baseline) / baseline))


def pairwise_deviation(re_values):
    re = np.asarray(re_values, dtype=np.float64)
    k = len(re)
    if k < 2:
        raise ValueError("pairwise deviation needs at least two values")
    return float(np.abs(re[:, None] - re[None, :]).sum() / (k * (k - 1)))


def accuracy_rows(reports, baseline):
    """One RE row per (estimator, K) against the per-pair ``baseline``.

    Pairs with a zero baseline are left out and reported once.
    """
    baseline = np.asarray(baseline, dtype=np.float64)
    keep = baseline > 0.0
    if not keep.all():
        console.print(f"[yellow]Skipping pairs with zero baseline: {np.flatnonzero(~keep).tolist()}[/]")
    if not keep.any():
        raise ZeroBaseline(list(range(len(baseline))))
    rows = []
    for report in reports:
        for K, means in report.pair_means.items():
            rows.append({'estimator': report.estimator, 'K': K,
                         'RE': relative_error(np.asarray(means)[keep], baseline[keep])})
    return rows

# ------------
# index costs
# ------------

def _timed(func, *args):
    start = time.perf_counter()
    result = func(*args)
    return result, time.perf_counter() - start


def index_report(graph, rng, L=None, w=None, refreshes=3):
    """Build, save/load, size and per-query refresh cost of both index types."""
    L = int(load_key('bfs_sharing.width')) if L is None else int(L)
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        index, build_s = _timed(build_index, graph, L, rng.split(0))
        path = os.path.join(tmp, 'bfs.idx')
        save_index(index, path)
        _, load_s = _timed(load_index, path)
        refresh_s = sum(_timed(refresh_index, index, graph, rng.split(1 + i))[1] for i in range(refreshes))
        rows.append({'method': 'bfs-sharing', 'build_s': build_s, 'load_s': load_s,
                     'size_bytes': os.path.getsize(path), 'refresh_s_per_query': refresh_s / refreshes})

        tree, build_s = _timed(build_fwd_index, graph, w)
        path = os.path.join(tmp, 'probtree.idx')
        save_probtree(tree, path)
        _, load_s = _timed(load_probtree, path)
        rows.append({'method': 'probtree', 'build_s': build_s, 'load_s': load_s,
                     'size_bytes': os.path.getsize(path), 'refresh_s_per_query': 0.0})
    return rows


def peak_rss_mb():
    """Peak resident set size of this process in MB, None where unavailable. Informational only."""
    try:
        import resource
    except ImportError:
        return None
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    # bytes on macOS, kilobytes elsewhere
    return peak / 2 ** 20 if os.uname().sysname == 'Darwin' else peak / 2 ** 10

# ------------
# csv output
# ------------

TIMING_COLUMNS = ['seconds', 'ms_per_sample', 'build_s', 'load_s', 'refresh_s_per_query']


def write_csv(frame, path, mask_timing=False):
    frame = frame.copy()
    if mask_timing:
        for col in TIMING_COLUMNS:
            if col in frame.columns:
                frame[col] = 0.0
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(f"# schema {CSV_SCHEMA_VERSION}\n")
        frame.to_csv(f, index=False, lineterminator='\n', float_format='%.12g')
    return path


def read_csv(path):
    return pd.read_csv(path, comment='#')


def _summary_table(reports):
    table = Table(title="Convergence")
    for col in ("estimator", "K", "R_K", "rho", "note"):
        table.add_column(col)
    for r in reports:
        last = r.rows[-1]
        table.add_row(r.estimator, str(r.converged_k), f"{last['R_K']:.4g}", f"{last['rho']:.3g}",
                      "all zero" if r.converged_at_zero else "")
    return table

# ------------
# full benchmark
# ------------

def run_bench(graph, workload, estimators=None, out_dir=None, rng=None, mask_timing=False, with_index=True,
              estimator_options=None, **protocol):
    """Convergence for every estimator, accuracy against MC at convergence, index costs.

    MC always runs (first) since it provides the accuracy baseline.
    Returns the reports keyed by estimator name.
    """
    estimators = list(load_key('bench.estimators') if estimators is None else estimators)
    out_dir = load_key('bench.out_dir') if out_dir is None else out_dir
    estimator_options = estimator_options or {}
    if not check_bench_settings(estimators, workload, **protocol):
        raise ReliabilityError("benchmark settings check failed")
    if 'mc' in estimators:
        estimators.remove('mc')
    estimators.insert(0, 'mc')

    console.print(Panel(f"{len(workload)} pairs, estimators: {', '.join(estimators)}",
                        title="[bold blue]Benchmark", expand=False))
    reports = {}
    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                  console=console, transient=True) as progress:
        for i, name in enumerate(estimators):
            reports[name] = run_convergence(name, graph, workload, rng=rng.split(i), progress=progress,
                                            **protocol, **estimator_options.get(name, {}))

    paths = {}
    frame = pd.concat([r.to_frame() for r in reports.values()], ignore_index=True)
    paths['convergence'] = write_csv(frame, os.path.join(out_dir, _CONVERGENCE_CSV), mask_timing)
    baseline = reports['mc'].final_means
    try:
        rows = accuracy_rows(reports.values(), baseline)
    except ZeroBaseline as e:
        console.print(f"[yellow]No accuracy rows: {e}[/]")
        rows = []
    frame = pd.DataFrame(rows, columns=ACCURACY_COLUMNS)
    paths['accuracy'] = write_csv(frame, os.path.join(out_dir, _ACCURACY_CSV), mask_timing)
    if with_index:
        frame = pd.DataFrame(index_report(graph, rng.split(len(estimators))), columns=INDEX_COLUMNS)
        paths['index'] = write_csv(frame, os.path.join(out_dir, _INDEX_CSV), mask_timing)

    console.print(_summary_table(reports.values()))
    final_re = [row["RE"] for row in rows if row["K"] == reports[row["estimator"]].converged_k]
    if len(final_re) >= 2:
        console.print(f"pairwise deviation of RE at convergence: {pairwise_deviation(final_re):.4g}")
    peak = peak_rss_mb()
    if peak is not None:
        console.print(f"[dim]peak RSS {peak:.1f} MB (informational)[/]")
    console.print(Panel("\n".join(f"{k}: {v}" for k, v in paths.items()),
                        title="[bold green]Benchmark complete", expand=False))
    return reports
