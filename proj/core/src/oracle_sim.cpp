#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "codesign/errors.hpp"
#include "codesign/perfmodel.hpp"

namespace codesign {

namespace {

using Matrix = std::vector<std::vector<long long>>;

// Element-granular view of one SRAM partition. Resident elements survive a
// fold boundary only when the whole operand fits.
struct Buffer {
    bool keep = false;
    std::set<std::uint64_t> resident;
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
    std::uint64_t dram_in = 0;
    std::uint64_t dram_out = 0;

    void fold_start() {
        if (!keep) resident.clear();
    }
    void read(std::uint64_t id) {
        if (!resident.contains(id)) {
            resident.insert(id);
            ++dram_in;
            ++writes;
        }
        ++reads;
    }
};

struct Token {
    bool ok = false;
    long long v = 0;
};

Matrix make(std::uint64_t rows, std::uint64_t cols, int salt) {
    Matrix x(rows, std::vector<long long>(cols));
    for (std::uint64_t i = 0; i < rows; ++i)
        for (std::uint64_t j = 0; j < cols; ++j)
            x[i][j] = static_cast<long long>((i * 7 + j * 3 + std::uint64_t(salt)) % 11) - 5;
    return x;
}

struct Run {
    std::uint64_t cycles = 0;
    std::uint64_t folds = 0;
    Buffer ifmap, filter, ofmap;
    Matrix out;
};

void simulate_os(const GemmShape& g, int R, int C, Run& run, const Matrix& A, const Matrix& B) {
    const long long m = (long long)g.m, n = (long long)g.n, k = (long long)g.k;
    for (long long r0 = 0; r0 < m; r0 += R) {
        for (long long c0 = 0; c0 < n; c0 += C) {
            ++run.folds;
            run.ifmap.fold_start();
            run.filter.fold_start();
            std::vector<std::vector<Token>> a(R, std::vector<Token>(C)), b = a;
            std::vector<std::vector<long long>> acc(R, std::vector<long long>(C, 0));
            long long last = -1;
            for (long long cyc = 0;; ++cyc) {
                auto na = a, nb = b;
                bool any = false;
                for (int i = 0; i < R; ++i) {
                    for (int j = 0; j < C; ++j) {
                        if (j == 0) {
                            const long long t = cyc - i;
                            na[i][j] = {};
                            if (t >= 0 && t < k) {
                                na[i][j].ok = true;
                                const long long row = r0 + i;
                                if (row < m) {
                                    run.ifmap.read(std::uint64_t(row * k + t));
                                    na[i][j].v = A[row][t];
                                }
                            }
                        } else {
                            na[i][j] = a[i][j - 1];
                        }
                        if (i == 0) {
                            const long long t = cyc - j;
                            nb[i][j] = {};
                            if (t >= 0 && t < k) {
                                nb[i][j].ok = true;
                                const long long col = c0 + j;
                                if (col < n) {
                                    run.filter.read(std::uint64_t(t * n + col));
                                    nb[i][j].v = B[t][col];
                                }
                            }
                        } else {
                            nb[i][j] = b[i - 1][j];
                        }
                        any = any || na[i][j].ok || nb[i][j].ok;
                        if (na[i][j].ok && nb[i][j].ok) {
                            acc[i][j] += na[i][j].v * nb[i][j].v;
                            last = cyc;
                        }
                    }
                }
                a = std::move(na);
                b = std::move(nb);
                if (!any) break;
            }
            run.cycles += std::uint64_t(last + 1);
            for (int i = 0; i < R; ++i)
                for (int j = 0; j < C; ++j)
                    if (r0 + i < m && c0 + j < n) {
                        run.out[r0 + i][c0 + j] = acc[i][j];
                        ++run.ofmap.writes;
                    }
        }
    }
    run.ofmap.reads += g.m * g.n;
    run.ofmap.dram_out += g.m * g.n;
}

void simulate_ws(const GemmShape& g, int R, int C, Run& run, const Matrix& A, const Matrix& B) {
    const long long m = (long long)g.m, n = (long long)g.n, k = (long long)g.k;
    std::vector<std::vector<bool>> spilled(g.m, std::vector<bool>(g.n, false));
    for (long long c0 = 0; c0 < n; c0 += C) {
        for (long long k0 = 0; k0 < k; k0 += R) {
            ++run.folds;
            run.ifmap.fold_start();
            run.filter.fold_start();

            // Preload: rows shift down one per cycle, bottom row enters first.
            std::vector<std::vector<long long>> w(R, std::vector<long long>(C, 0));
            for (int p = 0; p < R; ++p) {
                auto nw = w;
                for (int j = 0; j < C; ++j) {
                    for (int i = R - 1; i > 0; --i) nw[i][j] = w[i - 1][j];
                    const long long kk = k0 + (R - 1 - p);
                    const long long col = c0 + j;
                    nw[0][j] = 0;
                    if (kk < k && col < n) {
                        run.filter.read(std::uint64_t(kk * n + col));
                        nw[0][j] = B[kk][col];
                    }
                }
                w = std::move(nw);
                ++run.cycles;
            }

            std::vector<std::vector<Token>> a(R, std::vector<Token>(C)), ps = a;
            std::vector<std::vector<long long>> partial(g.m, std::vector<long long>(C, 0));
            long long last = -1;
            for (long long cyc = 0;; ++cyc) {
                auto na = a, nps = ps;
                bool any = false;
                for (int i = 0; i < R; ++i) {
                    for (int j = 0; j < C; ++j) {
                        if (j == 0) {
                            const long long t = cyc - i;
                            na[i][j] = {};
                            if (t >= 0 && t < m) {
                                na[i][j].ok = true;
                                const long long kk = k0 + i;
                                if (kk < k) {
                                    run.ifmap.read(std::uint64_t(t * k + kk));
                                    na[i][j].v = A[t][kk];
                                }
                            }
                        } else {
                            na[i][j] = a[i][j - 1];
                        }
                        const Token in = i == 0 ? Token{na[i][j].ok, 0} : ps[i - 1][j];
                        if (in.ok != na[i][j].ok) throw ModelError("oracle: partial sum out of step");
                        nps[i][j] = {};
                        if (na[i][j].ok) {
                            nps[i][j] = {true, in.v + na[i][j].v * w[i][j]};
                            last = cyc;
                        }
                        any = any || na[i][j].ok;
                        if (i == R - 1 && nps[i][j].ok) {
                            const long long t = cyc - (R - 1) - j;
                            partial[t][j] = nps[i][j].v;
                        }
                    }
                }
                a = std::move(na);
                ps = std::move(nps);
                if (!any) break;
            }
            run.cycles += std::uint64_t(last + 1);

            for (long long t = 0; t < m; ++t) {
                for (int j = 0; j < C && c0 + j < n; ++j) {
                    const long long col = c0 + j;
                    long long v = partial[t][j];
                    if (k0 > 0) {
                        if (spilled[t][col]) {
                            ++run.ofmap.dram_in;
                            ++run.ofmap.writes;
                        }
                        ++run.ofmap.reads;
                        v += run.out[t][col];
                    }
                    run.out[t][col] = v;
                    ++run.ofmap.writes;
                    if (!run.ofmap.keep) {
                        ++run.ofmap.reads;
                        ++run.ofmap.dram_out;
                        spilled[t][col] = true;
                    }
                }
            }
        }
    }
    if (run.ofmap.keep) {
        run.ofmap.reads += g.m * g.n;
        run.ofmap.dram_out += g.m * g.n;
    }
}

}  // namespace

LayerProfile oracle_simulate(const GemmShape& g, const AccelConfig& cfg) {
    validate(cfg);
    if (cfg.array_rows > 4 || cfg.array_cols > 4 || g.m > 8 || g.n > 8 || g.k > 8)
        throw ModelError("oracle: instance too large (limits: 4x4 array, GEMM dims <= 8)");
    if (g.m < 1 || g.n < 1 || g.k < 1) throw ValidationError("gemm", "m, n, k must be >= 1");

    const std::uint64_t b = std::uint64_t(cfg.bytes_per_element);
    const Matrix A = make(g.m, g.k, 1);
    const Matrix B = make(g.k, g.n, 4);

    Run run;
    run.out.assign(g.m, std::vector<long long>(g.n, 0));
    run.ifmap.keep = g.m * g.k * b <= cfg.sram_ifmap_bytes;
    run.filter.keep = g.k * g.n * b <= cfg.sram_filter_bytes;
    run.ofmap.keep = g.m * g.n * b <= cfg.sram_ofmap_bytes;

    if (cfg.dataflow == Dataflow::output_stationary)
        simulate_os(g, cfg.array_rows, cfg.array_cols, run, A, B);
    else
        simulate_ws(g, cfg.array_rows, cfg.array_cols, run, A, B);

    for (std::uint64_t i = 0; i < g.m; ++i) {
        for (std::uint64_t j = 0; j < g.n; ++j) {
            long long want = 0;
            for (std::uint64_t t = 0; t < g.k; ++t) want += A[i][t] * B[t][j];
            if (run.out[i][j] != want) throw ModelError("oracle: systolic product mismatch");
        }
    }

    LayerProfile p;
    p.gemm = g;
    p.folds = run.folds;
    p.compute_cycles = run.cycles;
    p.macs = g.m * g.n * g.k;
    p.pe_cycles = std::uint64_t(cfg.array_rows) * std::uint64_t(cfg.array_cols) * run.cycles;
    p.dram_ifmap = run.ifmap.dram_in * b;
    p.dram_filter = run.filter.dram_in * b;
    p.dram_ofmap = (run.ofmap.dram_in + run.ofmap.dram_out) * b;
    p.dram_traffic = p.dram_ifmap + p.dram_filter + p.dram_ofmap;
    p.sram.ifmap_reads = run.ifmap.reads * b;
    p.sram.ifmap_writes = run.ifmap.writes * b;
    p.sram.filter_reads = run.filter.reads * b;
    p.sram.filter_writes = run.filter.writes * b;
    p.sram.ofmap_reads = run.ofmap.reads * b;
    p.sram.ofmap_writes = run.ofmap.writes * b;
    p.memory_cycles = static_cast<std::uint64_t>(std::ceil(static_cast<double>(p.dram_traffic) / cfg.dram_bandwidth));
    p.total_cycles = std::max(p.compute_cycles, p.memory_cycles);
    return p;
}

}  // namespace codesign
