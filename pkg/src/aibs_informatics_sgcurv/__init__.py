from aibs_informatics_sgcurv._version import __version__  # noqa: F401
from aibs_informatics_sgcurv.repelling import *  # type: ignore  # noqa: F403
from aibs_informatics_sgcurv.signed_graph import *  # type: ignore  # noqa: F403
