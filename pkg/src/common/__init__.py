# Shared utilities for all modules.
