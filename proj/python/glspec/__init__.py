from ._glspec import *  # noqa: F401,F403
from ._glspec import __doc__  # noqa: F401
