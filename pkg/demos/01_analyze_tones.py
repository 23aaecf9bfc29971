"""Feature extraction walkthrough: what the analyzer hears in a tone mix.

Synthesizes a few signals, runs the 100 ms analysis pipeline on each, and
prints the dominant frequency, the 0-10 log-scaled value, and the RMS.
"""

from sonoviz.audio.features import extract_features, synth_tone


def describe(label, tones):
    chunks = synth_tone(tones, 300)
    print(f"\n{label}")
    for chunk in chunks:
        f = extract_features(chunk)
        dominant = f"{f.dominant_freq_hz:7.1f} Hz" if f.dominant_freq_hz else "  silent  "
        print(f"  chunk {f.seq}: dominant {dominant}   norm {f.normalized:5.2f}   rms {f.rms:.3f}")


describe("A 440 Hz sine (concert pitch):", [(440, 1.0)])
describe("A 5 kHz whistle, quiet:", [(5000, 0.2)])
describe("Deep 10 Hz rumble plus a 1 kHz tone (band gating keeps the tone):",
         [(10, 0.7), (1000, 0.3)])
describe("Silence:", [])

print("\nThe norm value is what scripts receive as their `frequency` input:")
for freq in (20, 100, 400, 2000, 8000):
    f = extract_features(synth_tone([(freq, 1.0)], 100)[0])
    print(f"  {freq:5d} Hz -> {f.normalized:5.2f} / 10")
