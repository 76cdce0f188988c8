"""
Signal sources and transforms: LCG family, MT19937, TRNG files, PUF fleets.
"""

from modules.generators.lcg import LCG_PRESETS, LcgParams, lcg_next, lcg_period, lcg_sequence
from modules.generators.puf import PufConfig, puf_responses
from modules.generators.sources import MT_PRESETS, GeneratorSpec, generate, preset_names
from modules.generators.transforms import LineInjection, binarize, concatenate, inject_line, quantize_levels
from modules.generators.trng import ingest_trng_file, load_trng_directory

__all__ = [
    'LCG_PRESETS', 'LcgParams', 'lcg_next', 'lcg_period', 'lcg_sequence', 'PufConfig', 'puf_responses',
    'MT_PRESETS', 'GeneratorSpec', 'generate', 'preset_names', 'LineInjection', 'binarize',
    'concatenate', 'inject_line', 'quantize_levels', 'ingest_trng_file', 'load_trng_directory',
]
