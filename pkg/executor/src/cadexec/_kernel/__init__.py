# Namespace for the bundled fallback CAD kernel.  The inner `cadquery`
# package is only importable by executed scripts when the runner injects
# this directory into sys.path, which it does exactly when the real
# cadquery package is absent from the interpreter.
