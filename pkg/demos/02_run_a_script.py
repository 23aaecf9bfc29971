"""Compile and drive one script by hand: the engine's inner loop, unrolled.

Loads the bundled volume-bar script, feeds it a changing sound level, ticks
the animation, and renders ASCII snapshots of the fill as it chases the
target.
"""

from pathlib import Path

from sonoviz.script.compiler import compile_script
from sonoviz.script.interpreter import dispatch_sound, instantiate, render, tick

source = (Path(__file__).parent.parent / "fixtures" / "scripts" / "volume_bar.ssc").read_text()
result = compile_script(source)
assert result.ok, [d.format() for d in result.diagnostics]
print(f"compiled {result.script.title!r} with variables {result.script.var_names}")

instance = instantiate(result.script)

# a sound level that jumps up, holds, then drops away
levels = [8.0] * 20 + [8.0] * 20 + [1.0] * 40
for step, level in enumerate(levels):
    if step % 5 == 0:  # sound events arrive at 10 Hz, ticks at 50 Hz
        dispatch_sound(instance, "unknown", level, 1.0)
    tick(instance, 0.02)
    if step % 8 == 0:
        commands, _ = render(instance, True)
        fill_rect = commands[1]
        bar = "#" * round(40 * fill_rect.width / 7.5)
        print(f"t={step * 0.02:5.2f}s  fill width {fill_rect.width:5.2f}  |{bar:<40}|")

print("\nthe draw pass emitted:", [type(c).__name__ for c in instance.last_commands])
