# Header lines carry a format version so that downstream readers can refuse
# files they do not understand.
TABLE_FORMAT_VERSION = 1

SAMPLE_HEADER = ("index", "seed", "value")
HISTOGRAM_HEADER = ("value", "count", "frequency")
SUPPORT_HEADER = ("z_minus", "z_plus", "x_minus", "x_plus", "rho_minus", "rho_plus")
CURVE_HEADER = ("u", "omega", "rho")
KERNEL_HEADER = ("m", "m_prime", "value", "nodes", "error")
RESCALED_HEADER = ("index", "statistic", "rescaled")
TW_HEADER = ("s", "cdf")
GAP_HEADER = ("delta", "theory", "empirical", "stderr")


def format_value(value):
    """Shortest round-trip text for floats, plain text for everything else."""
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, "dtype") and value.dtype.kind == "f":
        return repr(float(value))
    if hasattr(value, "dtype"):
        return str(value.item())
    return str(value)
