import numpy as np

from src.constants import MAX_SEED
from src.enums import Stream


def generator(seed: int, stream: Stream, *keys: int) -> np.random.Generator:
    """Get random generator of one stream of the run.

    All randomness of the project flows from one 64-bit run seed. Every
    consumer takes its own stream, identified by spawn key
    (stream, *keys) of numpy SeedSequence, so streams never overlap and
    adding new consumer never shifts numbers of existing one. Extra keys
    split a stream further, for example by batch index.
    :param int seed: run seed, integer from 0 to 2^64 - 1.
    :param Stream stream: consumer of random numbers.
    :param int keys: additional spawn keys.
    :returns: numpy random generator.
    """
    if not 0 <= seed <= MAX_SEED:
        msg = f'Seed must be between 0 and {MAX_SEED}, got {seed}'
        raise ValueError(msg)
    sequence = np.random.SeedSequence(
        entropy=seed,
        spawn_key=(int(stream), *keys),
    )
    return np.random.default_rng(sequence)
