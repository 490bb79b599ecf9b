from .exceptions import *
from .utils import *
from .padic import *
from .isogeny import *
from .groups import *
from .coeffs import *
from .classify import *
from .classfn import *
from .oracle import *
from .config import *
