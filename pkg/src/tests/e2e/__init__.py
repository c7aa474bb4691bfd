# E2E tests for database cache adapters
# See base_cache_tests.py for the main testing framework
