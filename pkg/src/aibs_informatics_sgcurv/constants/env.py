## sgcurv Environment Variable Constants

# fmt: off
SGCURV_SEED_VAR             = "SGCURV_SEED"
SGCURV_CORPUS_SIZE_VAR      = "SGCURV_CORPUS_SIZE"
SGCURV_LOG_LEVEL_VAR        = "SGCURV_LOG_LEVEL"
SGCURV_MAX_WORKERS_VAR      = "SGCURV_MAX_WORKERS"
# fmt: on


# fmt: off
DEFAULT_SEED                = 20240601
DEFAULT_CORPUS_SIZE         = 500
DEFAULT_LOG_LEVEL           = "WARNING"
DEFAULT_MAX_WORKERS         = 4
# fmt: on
