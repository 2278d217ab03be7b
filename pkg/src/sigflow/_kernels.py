"""Select the compiled polynomial kernels when available.

Set ``SIGFLOW_PURE=1`` to force the pure-Python implementation.
"""

import os

BACKEND = "python"

if os.environ.get("SIGFLOW_PURE") != "1":
    try:
        from ._kernels_c import (  # noqa: F401
            frac_add, frac_mul, frac_norm, padd, pdivmod, pgcd, pmul, pneg,
            pscale, psub, trim,
        )
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import (  # noqa: F401
        frac_add, frac_mul, frac_norm, padd, pdivmod, pgcd, pmul, pneg,
        pscale, psub, trim,
    )
