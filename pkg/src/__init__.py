from .errors import *
from .partitions import *
from .parameters import *
from .quadrature import *
from .schur import *
from .sampler import *
from .kernel import *
from .limit_shape import *
from .edge import *
from .critical import *
from .experiment import *
from .output_formats import *
