#!/usr/bin/env python3
"""Regenerate the embedded CO2 density/viscosity table (Span-Wagner EOS via CoolProp).

Writes core/data/co2_properties_v1.csv and core/src/co2_table.inc.
"""
import pathlib

import CoolProp.CoolProp as CP

ROOT = pathlib.Path(__file__).resolve().parent.parent
PRESSURES_MPA = [5.0 + 2.5 * i for i in range(15)]  # 5 .. 40
TEMPS_C = [20.0 + 5.0 * i for i in range(27)]  # 20 .. 150


def main():
    rows = []
    for p in PRESSURES_MPA:
        for t in TEMPS_C:
            rho = CP.PropsSI("D", "P", p * 1e6, "T", t + 273.15, "CO2")
            mu = CP.PropsSI("V", "P", p * 1e6, "T", t + 273.15, "CO2")
            rows.append((p, t, rho, mu))

    csv = ["pressure_mpa,temperature_c,density_kg_m3,viscosity_pa_s"]
    csv += [f"{p:.1f},{t:.1f},{rho:.4f},{mu:.6e}" for p, t, rho, mu in rows]
    (ROOT / "core/data/co2_properties_v1.csv").write_text("\n".join(csv) + "\n")

    inc = ["// Generated by tools/gen_co2_table.py. Do not edit.",
           f"constexpr std::size_t kPressureCount = {len(PRESSURES_MPA)};",
           f"constexpr std::size_t kTemperatureCount = {len(TEMPS_C)};",
           "constexpr double kPressureMPa[kPressureCount] = {" + ", ".join(f"{p:.1f}" for p in PRESSURES_MPA) + "};",
           "constexpr double kTemperatureC[kTemperatureCount] = {" + ", ".join(f"{t:.1f}" for t in TEMPS_C) + "};",
           "// Row-major over (pressure, temperature): {density kg/m3, viscosity Pa s}.",
           "constexpr double kTable[kPressureCount * kTemperatureCount][2] = {"]
    inc += [f"    {{{rho:.4f}, {mu:.6e}}}," for _, _, rho, mu in rows]
    inc.append("};")
    (ROOT / "core/src/co2_table.inc").write_text("\n".join(inc) + "\n")


if __name__ == "__main__":
    main()
