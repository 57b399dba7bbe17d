import argparse
import os
import sys

sys.path.append(os.path.dirname(os.path.abspath(__file__)))
from rich.markup import escape
from rich.panel import Panel

from batch.utils.bench_processor import run_bench
from batch.utils.workload import Workload, generate_workload
from core.estimator_backend import (build_fwd_index, build_index, get_estimator, load_index, load_probtree,
                                    save_index, save_probtree, RhhParams, RssParams)
from core.graph_utils import (assign_probabilities, format_edge_list, format_workload, model_from_name,
                              parse_workload, read_graph)
from core.oracle import exact_reliability
from core.utils import RandomStream, default_seed, exit_on_error, load_key, update_key
from core.utils.config_utils import yaml
from core.utils.decorator import console
from core.utils.errors import IndexFormatError
from core.utils.models import BFS_INDEX_MAGIC, ESTIMATOR_NAMES, PROBTREE_INNER_NAMES, PROBTREE_MAGIC

INDEX_METHODS = ['bfs-sharing', 'probtree']
PROB_MODELS = ['inverse-outdegree', 'uniform', 'exponential', 'fixed']

# ------------
# helpers
# ------------

def _rng(args):
    return RandomStream(default_seed() if args.seed is None else args.seed)


def _emit(text, out):
    """Results go to stdout unless a file is given."""
    if out is None:
        sys.stdout.write(text)
    else:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, 'w', encoding='utf-8') as f:
            f.write(text)
        console.print(f"[green]Wrote {out}[/]")


def load_any_index(path):
    with open(path, 'rb') as f:
        magic = f.read(8)
    if magic == BFS_INDEX_MAGIC:
        return load_index(path)
    if magic == PROBTREE_MAGIC:
        return load_probtree(path)
    raise IndexFormatError(f"{path} is neither a BFS-sharing nor a ProbTree index")


def _estimator_options(args):
    options = {}
    if args.r is not None or args.threshold is not None:
        rss = RssParams.from_config()
        options['rss'] = RssParams(r=args.r if args.r is not None else rss.r,
                                   threshold=args.threshold if args.threshold is not None else rss.threshold)
    if args.threshold is not None:
        options['rhh'] = RhhParams(threshold=args.threshold)
    return options


def _options_for(name, args, common):
    options = {}
    if name in common:
        options["params"] = common[name]
    if name == "probtree":
        inner = args.inner or load_key("probtree.inner")
        options["inner"] = inner
        if inner in common:
            options["params"] = common[inner]
    if name in INDEX_METHODS and args.width is not None:
        options['width'] = args.width
    return options

# ------------
# subcommands
# ------------

@exit_on_error("assign-probs failed")
def cmd_assign_probs(args):
    # third column read as a raw weight; only the exponential model looks at it
    graph = read_graph(args.graph, weighted=True)
    model = model_from_name(args.model, value=args.value, mu=args.mu)
    _emit(format_edge_list(assign_probabilities(graph, model, _rng(args))), args.out)


@exit_on_error("gen-workload failed")
def cmd_gen_workload(args):
    graph = read_graph(args.graph)
    workload = generate_workload(graph, args.pairs, args.hops, _rng(args))
    _emit(format_workload(graph, workload.pairs), args.out)


@exit_on_error("build-index failed")
def cmd_build_index(args):
    graph = read_graph(args.graph)
    if args.method == 'bfs-sharing':
        L = int(load_key('bfs_sharing.width')) if args.width is None else args.width
        index = build_index(graph, L, _rng(args))
        save_index(index, args.out)
        console.print(Panel(f"L={index.L}, {index.nbytes} bytes -> {args.out}", title="[bold green]BFS-sharing index", expand=False))
    else:
        index = build_fwd_index(graph, w=args.width, lossy=args.lossy or None)
        save_probtree(index, args.out)
        console.print(Panel(f"{len(index.bags)} bags, depth {index.depth}, root {len(index.root_nodes)} nodes -> {args.out}",
                            title="[bold green]ProbTree index", expand=False))


@exit_on_error("query failed")
def cmd_query(args):
    graph = read_graph(args.graph)
    s, t = graph.node_id(args.s), graph.node_id(args.t)
    index = load_any_index(args.index) if args.index else None
    options = _options_for(args.estimator, args, _estimator_options(args))
    estimator = get_estimator(args.estimator, graph, index=index, **options)
    estimate = estimator(s, t, args.k, _rng(args))
    sys.stdout.write(f"{estimate.value:.17g}\n")
    console.print(f"[dim]{args.estimator}: K={estimate.samples_used} in {estimate.elapsed * 1000:.2f} ms[/]")


@exit_on_error("exact failed")
def cmd_exact(args):
    graph = read_graph(args.graph)
    value = exact_reliability(graph, graph.node_id(args.s), graph.node_id(args.t))
    sys.stdout.write(f"{value:.17g}\n")


@exit_on_error("config failed")
def cmd_config(args):
    if args.value is None:
        value = load_key(args.key)
        if isinstance(value, dict):
            yaml.dump(value, sys.stdout)
        else:
            sys.stdout.write(f"{value}\n")
        return
    update_key(args.key, yaml.load(args.value))
    console.print(f"[green]{args.key} = {escape(args.value)}[/]")


@exit_on_error("bench failed")
def cmd_bench(args):
    graph = read_graph(args.graph)
    rng = _rng(args)
    if args.workload:
        with open(args.workload, encoding='utf-8') as f:
            pairs = parse_workload(f.read(), graph)
        workload = Workload(pairs=tuple(pairs), seed=rng.seed)
    else:
        workload = generate_workload(graph, args.pairs, args.hops, rng.split(0))
    if args.estimators == 'all':
        estimators = [name for name in ESTIMATOR_NAMES if name != 'lp-legacy']
    elif args.estimators is None:
        estimators = None
    else:
        estimators = [name.strip() for name in args.estimators.split(',') if name.strip()]
    common = _estimator_options(args)
    names = estimators or load_key('bench.estimators')
    options = {name: _options_for(name, args, common) for name in names}
    protocol = {key: value for key, value in [
        ('start_k', args.start_k), ('step', args.step), ('rho_threshold', args.rho),
        ('repeats', args.repeats), ('max_steps', args.max_steps), ('max_workers', args.jobs),
    ] if value is not None}
    run_bench(graph, workload, estimators=estimators, out_dir=args.out_dir, rng=rng.split(1),
              mask_timing=args.mask_timing, estimator_options=options, **protocol)

# ------------
# argument parsing
# ------------

def build_parser():
    parser = argparse.ArgumentParser(prog='strel', description="s-t reliability estimation on uncertain graphs")
    sub = parser.add_subparsers(dest='command', required=True)

    def command(name, func, help_text, graph=True, seed=True):
        p = sub.add_parser(name, help=help_text)
        if graph:
            p.add_argument('--graph', required=True, help="edge list 'u v p' per line")
        if seed:
            p.add_argument('--seed', type=int, default=None, help="default: $STREL_SEED or config")
        p.set_defaults(func=func)
        return p

    p = command('assign-probs', cmd_assign_probs, "assign edge probabilities from a model")
    p.add_argument('--model', choices=PROB_MODELS, required=True)
    p.add_argument('--value', type=float, help="probability of the fixed model")
    p.add_argument('--mu', type=float, help="scale of the exponential model")
    p.add_argument('--out')

    p = command('gen-workload', cmd_gen_workload, "draw s-t pairs at a fixed hop distance")
    p.add_argument('--pairs', type=int)
    p.add_argument('--hops', type=int)
    p.add_argument('--out')

    p = command('build-index', cmd_build_index, "build and save an index")
    p.add_argument('--method', choices=INDEX_METHODS, required=True)
    p.add_argument('--width', type=int, help="L for bfs-sharing, w for probtree")
    p.add_argument('--lossy', action='store_true', help="allow probtree widths above 2")
    p.add_argument('--out', required=True)

    for name, func, help_text in [('query', cmd_query, "estimate R(s, t)"),
                                  ('bench', cmd_bench, "run the convergence benchmark")]:
        p = command(name, func, help_text)
        p.add_argument('--inner', choices=PROBTREE_INNER_NAMES, default=None)
        p.add_argument('--r', type=int, help="rss stratum edges")
        p.add_argument('--threshold', type=int, help="rhh/rss recursion threshold")
        p.add_argument('--width', type=int, help="L for bfs-sharing, w for probtree")
        if name == 'query':
            p.add_argument('--s', required=True)
            p.add_argument('--t', required=True)
            p.add_argument('--estimator', choices=ESTIMATOR_NAMES, required=True)
            p.add_argument('--k', type=int, required=True)
            p.add_argument('--index')
        else:
            p.add_argument('--workload', help="'s t' per line; generated when omitted")
            p.add_argument('--estimators', help="comma list or 'all'")
            p.add_argument('--pairs', type=int)
            p.add_argument('--hops', type=int)
            p.add_argument('--start-k', type=int)
            p.add_argument('--step', type=int)
            p.add_argument('--rho', type=float)
            p.add_argument('--repeats', type=int)
            p.add_argument('--max-steps', type=int)
            p.add_argument('--jobs', type=int)
            p.add_argument('--out-dir')
            p.add_argument('--mask-timing', action='store_true', help="write zeros in timing columns")

    p = command('exact', cmd_exact, "exact R(s, t) by world enumeration", seed=False)
    p.add_argument('--s', required=True)
    p.add_argument('--t', required=True)

    p = command('config', cmd_config, "show or set a config.yaml key", graph=False, seed=False)
    p.add_argument('key', help="dotted path, e.g. bench.repeats")
    p.add_argument('value', nargs='?', help="YAML scalar to store; omit to print the current value")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
