import os

# Debug invariant assertions are on throughout the test suite unless a test
# scopes them off explicitly (benchmark-style measurements do).
os.environ.setdefault("TARSKI_DEBUG_CHECKS", "1")
