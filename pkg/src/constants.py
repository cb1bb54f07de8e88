from pathlib import Path

SETTINGS_FILE_PATH = Path('settings.toml')
TEST_DIRECTORY_DEPTH = {'src': 1, 'tests': 2, 'auto': 3}  # levels below root
UNDEFINED = -1  # sentinel of partial injections: no image
DEFAULT_SEED = 20240513
MAX_SEED = 2**64 - 1
PATTERN_ALPHABET = frozenset('01')
MONTE_CARLO_BATCH = 20_000
SYNTHESIS_BATCH = 256  # vertices whose membership columns are held at once
MIN_FREE_TORUS_MODULUS = 3  # below it generator equals its own inverse
INT64_SAFE_LIMIT = 2**62
CSV_HEADER = (
    'rule_id',
    'instance_id',
    'd',
    'samples',
    'mean',
    'stderr',
    'rv_reference',
    'engine_ratio_inverse',
    'exact_density',
)
