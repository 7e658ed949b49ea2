MANIFEST_SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"

# Packages whose versions are recorded in every manifest
MANIFEST_PACKAGES = ("numpy", "scipy", "numba", "mpmath")

COMMAND_OUTPUTS = {
    "sample": ("samples.csv", "histogram.csv"),
    "limit-shape": ("support.csv", "curve.csv"),
    "kernel": ("kernel.csv",),
    "fluctuations": ("rescaled.csv", "tracy_widom.csv", "ks.json"),
    "critical": ("gaps.csv",),
    "tw-table": ("tracy_widom.csv",),
}
