from .stochastic import *  # noqa: F401,F403
from .cyclic import *  # noqa: F401,F403
from .fullsupport import *  # noqa: F401,F403
