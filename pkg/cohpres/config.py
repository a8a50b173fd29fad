from decouple import config
import os

BASE_DIR = os.path.abspath(os.path.dirname(__file__))

class Config:
    TERMINATION_BUDGET = config('COHPRES_TERMINATION_BUDGET', default=10000, cast=int)
    MAX_WORD_LENGTH = config('COHPRES_MAX_WORD_LENGTH', default=6, cast=int)
    RESIDUAL_BUDGET = config('COHPRES_RESIDUAL_BUDGET', default=10000, cast=int)
    # entries kept per residual table before the oldest is dropped
    RESIDUAL_MEMO_SIZE = config('COHPRES_RESIDUAL_MEMO_SIZE', default=65536, cast=int)
    SEARCH_DEPTH = config('COHPRES_SEARCH_DEPTH', default=12, cast=int)
    SEARCH_NODE_CAP = config('COHPRES_SEARCH_NODE_CAP', default=50000, cast=int)
    HOM_EXPLOSION_CAP = config('COHPRES_HOM_EXPLOSION_CAP', default=200000, cast=int)
    TIETZE_BUDGET = config('COHPRES_TIETZE_BUDGET', default=10000, cast=int)
    CONTEXT_SAMPLE_LENGTH = config('COHPRES_CONTEXT_SAMPLE_LENGTH', default=3, cast=int)
    # A3 falls back to the up-to-exchange variant when the strict one fails
    EXCHANGE_FALLBACK = config('COHPRES_EXCHANGE_FALLBACK', default=True, cast=bool)
    LOG_LEVEL = config('COHPRES_LOG_LEVEL', default='INFO')
    CORPUS_DIR = config('COHPRES_CORPUS_DIR', default=os.path.join(BASE_DIR, '..', 'corpus'))
