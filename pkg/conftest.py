import os
import sys

# Make `import src...` work when pytest is started from the repository root
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))
