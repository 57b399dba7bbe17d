import ast

import pytest

from core.utils.config_utils import ROOT_DIR
from strel import main

DIAMOND = "0 1 0.5\n0 2 0.5\n1 3 0.5\n2 3 0.5\n"
BENCH = ['--start-k', '100', '--step', '100', '--repeats', '5', '--max-steps', '5', '--jobs', '2']


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / 'diamond.txt'
    path.write_text(DIAMOND, encoding='utf-8')
    return str(path)


def _stdout(capsys, argv):
    assert main(argv) == 0
    return capsys.readouterr().out


def test_exact(capsys, diamond_file):
    assert _stdout(capsys, ['exact', '--graph', diamond_file, '--s', '0', '--t', '3']) == "0.4375\n"


def test_query_is_deterministic(capsys, diamond_file):
    argv = ['query', '--graph', diamond_file, '--s', '0', '--t', '3', '--estimator', 'probtree',
            '--inner', 'rss', '--r', '1', '--k', '500', '--seed', '5']
    first = _stdout(capsys, argv)
    assert first == _stdout(capsys, argv)
    assert 0.0 <= float(first) <= 1.0


def test_seed_from_environment(capsys, monkeypatch, diamond_file):
    argv = ['query', '--graph', diamond_file, '--s', '0', '--t', '3', '--estimator', 'mc', '--k', '1000']
    explicit = _stdout(capsys, argv + ['--seed', '11'])
    monkeypatch.setenv('STREL_SEED', '11')
    assert _stdout(capsys, argv) == explicit


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as e:
        main(['frobnicate'])
    assert e.value.code == 2


def test_bad_graph_is_a_data_error(tmp_path):
    bad = tmp_path / 'bad.txt'
    bad.write_text("0 1 1.5\n", encoding='utf-8')
    assert main(['exact', '--graph', str(bad), '--s', '0', '--t', '1']) == 3


def test_index_mismatch(tmp_path, diamond_file):
    index = str(tmp_path / 'bfs.idx')
    assert main(['build-index', '--graph', diamond_file, '--method', 'bfs-sharing', '--width', '64', '--out', index]) == 0
    assert main(['query', '--graph', diamond_file, '--s', '0', '--t', '3', '--estimator', 'probtree',
                 '--k', '10', '--index', index]) == 3


def test_narrow_index(tmp_path, diamond_file):
    index = str(tmp_path / 'bfs.idx')
    main(['build-index', '--graph', diamond_file, '--method', 'bfs-sharing', '--width', '64', '--out', index])
    argv = ['query', '--graph', diamond_file, '--s', '0', '--t', '3', '--estimator', 'bfs-sharing', '--index', index]
    assert main(argv + ['--k', '64']) == 0
    assert main(argv + ['--k', '100']) == 3


def test_probtree_index_round_trip(capsys, tmp_path, diamond_file):
    index = str(tmp_path / 'pt.idx')
    assert main(['build-index', '--graph', diamond_file, '--method', 'probtree', '--out', index]) == 0
    argv = ['query', '--graph', diamond_file, '--s', '0', '--t', '3', '--estimator', 'probtree', '--k', '300',
            '--seed', '2']
    capsys.readouterr()
    assert _stdout(capsys, argv + ['--index', index]) == _stdout(capsys, argv)


def test_bench_writes_csvs(tmp_path, diamond_file):
    workload = tmp_path / 'pairs.txt'
    workload.write_text("0 3\n0 1\n", encoding='utf-8')
    out_dir = tmp_path / 'out'
    argv = ['bench', '--graph', diamond_file, '--workload', str(workload), '--estimators', 'rhh,rss',
            '--rho', '0.05', '--out-dir', str(out_dir), '--mask-timing', '--seed', '1'] + BENCH
    assert main(argv) == 0
    for name in ('convergence.csv', 'accuracy.csv', 'index.csv'):
        assert (out_dir / name).read_text(encoding='utf-8').startswith("# schema 1\n")


def test_bench_non_convergence(tmp_path, diamond_file):
    workload = tmp_path / 'pairs.txt'
    workload.write_text("0 3\n", encoding='utf-8')
    argv = ['bench', '--graph', diamond_file, '--workload', str(workload), '--estimators', 'mc',
            '--rho', '1e-9', '--out-dir', str(tmp_path / 'out'), '--seed', '1'] + BENCH
    assert main(argv) == 4


def test_assign_fixed_probabilities(capsys, tmp_path):
    raw = tmp_path / 'counts.txt'
    raw.write_text("a b 3\nb c 4\n", encoding='utf-8')
    out = _stdout(capsys, ['assign-probs', '--graph', str(raw), '--model', 'fixed', '--value', '0.25'])
    assert out == "a b 0.25\nb c 0.25\n"


def test_fixed_model_needs_a_value(tmp_path):
    raw = tmp_path / 'counts.txt'
    raw.write_text("a b 3\n", encoding='utf-8')
    assert main(['assign-probs', '--graph', str(raw), '--model', 'fixed']) == 2


def test_gen_workload(capsys, tmp_path):
    chain = tmp_path / 'chain.txt'
    chain.write_text("0 1 0.5\n1 2 0.5\n", encoding='utf-8')
    assert _stdout(capsys, ['gen-workload', '--graph', str(chain), '--pairs', '1', '--hops', '2']) == "0 2\n"


def test_config_show_and_set(capsys, isolated_config):
    assert _stdout(capsys, ['config', 'bench.repeats']) == "100\n"
    assert main(['config', 'bench.repeats', '7']) == 0
    assert _stdout(capsys, ['config', 'bench.repeats']) == "7\n"
    assert 'repeats: 7' in isolated_config.read_text(encoding='utf-8')


def test_config_seed_drives_queries(capsys, diamond_file):
    argv = ['query', '--graph', diamond_file, '--s', '0', '--t', '3', '--estimator', 'mc', '--k', '1000']
    explicit = _stdout(capsys, argv + ['--seed', '11'])
    assert main(['config', 'default_seed', '11']) == 0
    assert _stdout(capsys, argv) == explicit


def test_config_unknown_key():
    assert main(['config', 'bench.nope', '1']) == 3
    assert main(['config', 'nope.repeats']) == 3
    assert main(['config', 'nope.repeats', '1']) == 3


def test_pytest_is_a_test_extra_not_an_install_requirement():
    tree = ast.parse(open(f"{ROOT_DIR}/setup.py", encoding='utf-8').read())
    assigns = {node.targets[0].id: node.value for node in tree.body
               if isinstance(node, ast.Assign) and isinstance(node.targets[0], ast.Name)}
    test_requirements = ast.literal_eval(assigns['TEST_REQUIREMENTS'])
    assert 'pytest' in test_requirements
    call = next(node.value for node in tree.body
                if isinstance(node, ast.Expr) and getattr(node.value.func, 'id', None) == 'setup')
    keywords = {kw.arg: kw.value for kw in call.keywords}
    assert isinstance(keywords['install_requires'], ast.Name)
    assert ast.unparse(keywords['extras_require']) == "{'test': TEST_REQUIREMENTS}"
    # the filter that builds install_requires drops every test requirement
    lines = open(f"{ROOT_DIR}/requirements.txt", encoding='utf-8').read().splitlines()
    installed = [line for line in lines if line.strip() and line not in test_requirements]
    assert 'pytest' not in installed and 'numpy==1.26.4' in installed
