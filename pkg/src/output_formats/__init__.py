from .tables import *
from .manifest import *
