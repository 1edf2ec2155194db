#include <benchmark/benchmark.h>

#include "mbrom/hertz.hpp"
#include "mbrom/integrator.hpp"

using namespace mbrom;

namespace {

Scenario scenario_with(int n_elem) {
    Scenario sc;
    sc.n_elem = n_elem;
    return sc;
}

void BM_AssembleBeam(benchmark::State& state) {
    const Scenario sc = scenario_with(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            assemble_beam(sc.n_elem, sc.beam_material, sc.geometry, sc.bc, sc.mass_style));
    }
}
BENCHMARK(BM_AssembleBeam)->Arg(40)->Arg(150);

void BM_SolveModes(benchmark::State& state) {
    const Scenario sc = scenario_with(static_cast<int>(state.range(0)));
    const AssembledModel m =
        assemble_beam(sc.n_elem, sc.beam_material, sc.geometry, sc.bc, sc.mass_style);
    for (auto _ : state) benchmark::DoNotOptimize(solve_modes(m));
}
BENCHMARK(BM_SolveModes)->Arg(40)->Arg(150);

void BM_BuildRom(benchmark::State& state) {
    Scenario sc = scenario_with(static_cast<int>(state.range(0)));
    AssembledModel m =
        assemble_beam(sc.n_elem, sc.beam_material, sc.geometry, sc.bc, sc.mass_style);
    const int dof = translation_dof(m, nearest_node(m, sc.impact_x()));
    m = with_boundary(std::move(m), {dof});
    const ModalBasis basis = solve_modes(m);
    const std::vector<int> retained = select_retained(basis, sc.f_cut);
    for (auto _ : state) benchmark::DoNotOptimize(build_rom(m, basis, retained));
}
BENCHMARK(BM_BuildRom)->Arg(40)->Arg(150);

void BM_StaticContactSolve(benchmark::State& state) {
    const ImpactSetup setup = prepare(scenario_with(60));
    const StaticContactSolver solver(setup.coupled, setup.contact);
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(setup.coupled.n_m());
    eta(0) = -1e-4;  // pushes the pair into contact
    for (auto _ : state) benchmark::DoNotOptimize(solver.solve(eta));
}
BENCHMARK(BM_StaticContactSolve);

void BM_SemiExplicitStep(benchmark::State& state) {
    const ImpactSetup setup = prepare(scenario_with(60));
    SimState s;
    s.eta = Eigen::VectorXd::Zero(setup.coupled.n_m());
    s.eta_dot_half = Eigen::VectorXd::Zero(setup.coupled.n_m());
    s.eta_dot_half(0) = -setup.scenario.impact_velocity * std::sqrt(setup.scenario.sphere_mass);
    for (auto _ : state) {
        s = step(s, setup.coupled, setup.contact, setup.scenario.dt);
        benchmark::DoNotOptimize(s.eta);
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SemiExplicitStep);

void BM_SimulateImpact(benchmark::State& state) {
    Scenario sc = scenario_with(60);
    sc.t_end = 1e-4;
    const ImpactSetup setup = prepare(sc);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(setup));
}
BENCHMARK(BM_SimulateImpact);

void BM_HertzOracle(benchmark::State& state) {
    Scenario sc = scenario_with(60);
    sc.t_end = 1e-4;
    const ImpactSetup setup = prepare(sc);
    for (auto _ : state) benchmark::DoNotOptimize(hertz_oracle(setup));
}
BENCHMARK(BM_HertzOracle);

}  // namespace

BENCHMARK_MAIN();
