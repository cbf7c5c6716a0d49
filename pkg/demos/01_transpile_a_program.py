"""Build a small command program in memory and turn it into CadQuery code.

The program draws a rectangle with a circular hole and extrudes it.  Run:

    python demos/01_transpile_a_program.py
"""

import cadeval as cv

program = cv.sequence_from_commands(
    [
        # outer rectangle: four chained lines, closed implicitly
        cv.loop_start(),
        cv.line(1.4, 0.0),
        cv.line(1.4, 0.8),
        cv.line(0.0, 0.8),
        cv.line(0.0, 0.0),
        # a hole: one circle loop inside the rectangle
        cv.loop_start(),
        cv.circle(0.45, 0.4, 0.2),
        # extrude the profile 0.3 units along +z as a new body
        cv.extrude(0, 0, 0, 0, 0, 0, 1.0, 0.3, 0.0, cv.BooleanOp.NEW_BODY, cv.ExtentType.ONE_SIDED),
    ]
)

document = cv.serialize_sequence(program)
print("--- program document ---")
print(document)

script = cv.transpile(program)
print("--- emitted CadQuery script ---")
print(script.source)
print(f"({script.line_count} lines, {script.char_count} characters)")

# serialization round-trips exactly
assert cv.parse_sequence(document) == program
