// SPDX-License-Identifier: Apache-2.0
//
// chsound - channel sounder post-processing and channel statistics
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "chsound/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

namespace
{

using namespace chsound;

struct OverrideFlags
{
    ManifestOverrides values;
    std::string distance_mode;
};

void add_override_flags(CLI::App &cmd, OverrideFlags &f)
{
    auto &o = f.values;
    cmd.add_option("--bands", o.bands_ghz, "Carrier bands in GHz")->delimiter(',');
    cmd.add_option("--bandwidth", o.bandwidth_hz, "Sounder bandwidth in Hz");
    cmd.add_option("--record-len", o.record_len, "Samples per capture record");
    cmd.add_option("--reps", o.reps_per_position, "Repetitions per position");
    cmd.add_option("--snapshots", o.snapshots_per_rep, "Snapshots averaged into one repetition");
    cmd.add_option("--snr-gate", o.snr_gate_db, "SNR gate in dB");
    cmd.add_option("--peak-window", o.peak_window_db, "MPC window below the peak in dB");
    cmd.add_option("--floor-margin", o.floor_margin_db, "MPC margin above the noise floor in dB");
    cmd.add_option("--deconv-floor", o.deconv_floor_db, "Calibration bins below this level re. max are dropped");
    cmd.add_option("--distance-mode", f.distance_mode, "Distance used for path loss")->check(CLI::IsMember({"D2", "D3"}));
}

void finish_overrides(OverrideFlags &f)
{
    if (!f.distance_mode.empty())
        f.values.distance_mode = parse_distance_mode(f.distance_mode);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Channel sounder post-processing: synthetic campaigns, PL/DS/KF extraction and model fits"};
    app.require_subcommand(1);

    InitOptions init;
    std::string init_mode = "D2";
    auto *c_init = app.add_subcommand("init", "Write the default manifest and truth model");
    c_init->add_option("--out", init.out, "Output directory")->required();
    c_init->add_flag("--with-nlos", init.with_nlos, "Include the NLOS position list");
    c_init->add_option("--distance-mode", init_mode, "D2 or D3")->check(CLI::IsMember({"D2", "D3"}));

    SimulateOptions sim;
    OverrideFlags sim_flags;
    std::string sim_manifest, sim_truth;
    auto *c_sim = app.add_subcommand("simulate", "Generate a synthetic capture tree");
    c_sim->add_option("--manifest", sim_manifest, "Campaign manifest JSON (default layout when omitted)");
    c_sim->add_option("--truth", sim_truth, "Truth model JSON (default model when omitted)");
    c_sim->add_option("--seed", sim.seed, "Master seed");
    c_sim->add_option("--out", sim.out, "Output directory")->required();
    c_sim->add_option("--jobs", sim.jobs, "Worker threads (0: all cores)");
    c_sim->add_flag("--with-nlos", sim.with_nlos, "Include NLOS positions in the default layout");
    add_override_flags(*c_sim, sim_flags);

    ProcessOptions proc;
    OverrideFlags proc_flags;
    std::string proc_manifest, proc_captures, ds_source = "mpc";
    auto *c_proc = app.add_subcommand("process", "Extract PL, DS and KF per position and band");
    c_proc->add_option("--in", proc.in, "Campaign directory with manifest.json and captures/")->required();
    c_proc->add_option("--manifest", proc_manifest, "Manifest JSON replacing <in>/manifest.json");
    c_proc->add_option("--captures", proc_captures, "Capture root replacing <in>/captures");
    c_proc->add_option("--out", proc.out, "Output directory")->required();
    c_proc->add_option("--jobs", proc.jobs, "Worker threads (0: all cores)");
    c_proc->add_option("--ds-source", ds_source, "Delay spread from extracted MPCs or APDP bins")
        ->check(CLI::IsMember({"mpc", "bins"}));
    add_override_flags(*c_proc, proc_flags);

    FitOptions fit;
    auto *c_fit = app.add_subcommand("fit", "Fit CI and FI path-loss models per band and scenario");
    c_fit->add_option("--positions", fit.positions, "Position CSV")->required();
    c_fit->add_option("--out", fit.out, "Output directory")->required();

    ReportOptions rep;
    std::string rep_manifest;
    auto *c_rep = app.add_subcommand("report", "Write the campaign summary and plot data");
    c_rep->add_option("--in", rep.in, "Output directory of process")->required();
    c_rep->add_option("--manifest", rep_manifest, "Manifest JSON replacing <in>/manifest.json");
    c_rep->add_option("--out", rep.out, "Output directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return ExitUsage;
    }

    try
    {
        if (c_init->parsed())
        {
            init.distance_mode = parse_distance_mode(init_mode);
            return run_init(init);
        }
        if (c_sim->parsed())
        {
            finish_overrides(sim_flags);
            sim.overrides = sim_flags.values;
            if (!sim_manifest.empty())
                sim.manifest = sim_manifest;
            if (!sim_truth.empty())
                sim.truth = sim_truth;
            return run_simulate(sim);
        }
        if (c_proc->parsed())
        {
            finish_overrides(proc_flags);
            proc.overrides = proc_flags.values;
            if (!proc_manifest.empty())
                proc.manifest = proc_manifest;
            if (!proc_captures.empty())
                proc.captures = proc_captures;
            proc.ds_source = ds_source == "bins" ? DsSource::Bins : DsSource::Mpc;
            return run_process(proc);
        }
        if (c_fit->parsed())
            return run_fit(fit);
        if (c_rep->parsed())
        {
            if (!rep_manifest.empty())
                rep.manifest = rep_manifest;
            return run_report(rep);
        }
    }
    catch (const std::exception &e)
    {
        fmt::print(stderr, "error: {}\n", e.what());
        return ExitFatal;
    }
    return ExitUsage;
}
