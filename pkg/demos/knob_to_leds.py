#!/usr/bin/env python3
"""Turn a knob on one end of a 10 m tube, light LEDs on the other.

The transmitter reads a 10-bit potentiometer, maps it to how many of the
12 LEDs should be lit, and sends that count as one UART byte through the
channel. The receiver decodes and displays it. Every position of the
knob must survive the trip.
"""

from ionoline import knob_demo


def bar(n: int) -> str:
    return "[" + "#" * n + "." * (12 - n) + "]"


def main() -> None:
    print("pot value -> LEDs lit after the 10 m channel\n")
    for pot in (0, 128, 341, 512, 767, 1023):
        led = knob_demo(pot)
        print(f"  {pot:4d} -> {led:2d}  {bar(led)}")

    # spot-check the full range; knob_demo asserts the decoded byte
    # matches the transmitted count on every call
    for pot in range(1024):
        knob_demo(pot)
    print("\nAll 1024 knob positions decoded to the right LED count.")


if __name__ == "__main__":
    main()
