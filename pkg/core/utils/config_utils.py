import os
import threading
from ruamel.yaml import YAML

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
CONFIG_PATH = os.environ.get('STREL_CONFIG', os.path.join(ROOT_DIR, 'config.yaml'))
lock = threading.Lock()

yaml = YAML()
yaml.preserve_quotes = True

# -----------------------
# load & update config
# -----------------------

def _config_path():
    # re-read the env var so tests can point at a scratch copy
    return os.environ.get('STREL_CONFIG', CONFIG_PATH)

def _walk(data, keys):
    """Mapping that holds ``keys[-1]``; KeyError names the first missing part."""
    current = data
    for k in keys[:-1]:
        if not isinstance(current, dict) or k not in current:
            raise KeyError(f"Key '{k}' not found in configuration")
        current = current[k]
    if not isinstance(current, dict) or keys[-1] not in current:
        raise KeyError(f"Key '{keys[-1]}' not found in configuration")
    return current

def load_key(key):
    with lock:
        with open(_config_path(), 'r', encoding='utf-8') as file:
            data = yaml.load(file)
    keys = key.split('.')
    return _walk(data, keys)[keys[-1]]

def update_key(key, new_value):
    """Store ``new_value`` under an existing dotted key, keeping the file's comments."""
    with lock:
        path = _config_path()
        with open(path, 'r', encoding='utf-8') as file:
            data = yaml.load(file)
        keys = key.split('.')
        _walk(data, keys)[keys[-1]] = new_value
        with open(path, 'w', encoding='utf-8') as file:
            yaml.dump(data, file)

def default_seed():
    """Seed used when no --seed is given: STREL_SEED env var, then config."""
    env_seed = os.environ.get('STREL_SEED')
    if env_seed not in (None, ''):
        return int(env_seed)
    return int(load_key('default_seed'))

if __name__ == "__main__":
    print(load_key('bench.start_k'))
