import logging
import os
import sys
import unittest

# Desk-scale Monte Carlo checks run only with DUAL_SCHUR_SLOW_TESTS=1

if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG)
    here = os.path.dirname(os.path.abspath(__file__))
    suite = unittest.defaultTestLoader.discover(os.path.join(here, 'tests'), top_level_dir=here)
    result = unittest.TextTestRunner(verbosity=2).run(suite)
    sys.exit(not result.wasSuccessful())
