# Package marker - study scripts (run_study.py)
