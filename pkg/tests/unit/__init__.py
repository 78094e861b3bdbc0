# Package marker - makes this directory a Python package
