/*
 * Copyright 2026 The mdhc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mdhc/mdhc.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

struct Owned {
    char* text = nullptr;
    ~Owned() { mdhc_string_free(text); }
    std::string str() const { return text ? text : ""; }
};

struct WorkspaceHandle {
    mdhc_workspace* ws = nullptr;
    ~WorkspaceHandle() { mdhc_workspace_close(ws); }
};

int exit_code(mdhc_status status) {
    switch (status) {
        case MDHC_OK:
            return kExitOk;
        case MDHC_ERR_INVALID_ARGUMENT:
        case MDHC_ERR_RANGE:
            return kExitUsage;
        default:
            return kExitRejected;
    }
}

int report(mdhc_status status) {
    if (status != MDHC_OK && status != MDHC_REJECTED) {
        std::cerr << "error: " << mdhc_status_string(status) << ": " << mdhc_last_error() << "\n";
    } else if (status == MDHC_REJECTED) {
        std::cerr << "rejected: " << mdhc_last_error() << "\n";
    }
    return exit_code(status);
}

// Resolves --seed; in entropy mode draws one and prints it so the run can be repeated.
std::optional<std::string> resolve_seed(const std::string& given) {
    if (!given.empty()) return given;
    Owned seed;
    if (mdhc_entropy_seed(&seed.text) != MDHC_OK) {
        std::cerr << "error: " << mdhc_last_error() << "\n";
        return std::nullopt;
    }
    std::cerr << "seed: " << seed.str() << "\n";
    return seed.str();
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-dimensional hash chain payments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string profile = "toy";
    std::string seed;
    std::string dir = ".";
    app.add_option("--profile", profile, "Parameter profile")->check(CLI::IsMember({"toy", "demo"}));
    app.add_option("--seed", seed, "Seed as lowercase hex; omitted means system entropy");
    app.add_option("--dir", dir, "Workspace directory");

    auto* params = app.add_subcommand("params", "Generate the bank modulus and exponents");
    std::size_t bits = 0;
    std::size_t dims = 0;
    params->add_option("--bits", bits, "Bits per safe prime (default from profile)");
    params->add_option("--m", dims, "Number of exponents (default from profile)");

    auto* mint = app.add_subcommand("mint", "Mint an S1 coin batch or S2 coin chains for a customer");
    std::string scheme;
    std::uint32_t length = 1;
    std::string customer;
    std::string vendor;
    mint->add_option("--scheme", scheme, "s1 or s2")->required()->check(CLI::IsMember({"s1", "s2"}));
    mint->add_option("--n", length, "Chain length for s2")->check(CLI::Range(1u, 1u << 20));
    mint->add_option("--customer", customer, "Customer name")->required();
    mint->add_option("--vendor", vendor, "Restrict the coins to one vendor");

    auto* pay = app.add_subcommand("pay", "Take the customer's next coin and address it to a vendor");
    std::string out_path;
    pay->add_option("--customer", customer, "Customer name")->required();
    pay->add_option("--vendor", vendor, "Vendor name")->required();
    pay->add_option("--out", out_path, "Write the payment here instead of stdout");

    auto* verify = app.add_subcommand("verify", "Vendor-side acceptance of a payment");
    std::string payment_path;
    verify->add_option("--vendor", vendor, "Vendor name")->required();
    verify->add_option("--payment", payment_path, "Payment file, or - for stdin")->required();

    auto* redeem = app.add_subcommand("redeem", "Deposit everything a vendor holds");
    redeem->add_option("--vendor", vendor, "Vendor name")->required();

    auto* scenario = app.add_subcommand("scenario", "Run a scenario script");
    std::string script_path;
    scenario->add_option("script", script_path, "Scenario JSON file")->required();

    auto* bench = app.add_subcommand("bench", "Measure traversal cost for a storage strategy");
    std::string shape = "mdhc";
    std::uint32_t n = 1;
    std::size_t m = 1;
    std::string strategy = "store_root_only";
    std::uint32_t t = 1;
    std::string requests = "all";
    bench->add_option("--shape", shape, "linear or mdhc")->check(CLI::IsMember({"linear", "mdhc"}));
    bench->add_option("--n", n, "Steps per dimension")->check(CLI::PositiveNumber);
    bench->add_option("--m", m, "Dimensions (ignored for linear)")->check(CLI::PositiveNumber);
    bench->add_option("--strategy", strategy, "store_all, store_root_only or checkpoint")
        ->check(CLI::IsMember({"store_all", "store_root_only", "checkpoint"}));
    bench->add_option("--t", t, "Checkpoint spacing")->check(CLI::PositiveNumber);
    bench->add_option("--requests", requests, "all or sample:K");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (params->parsed()) {
            auto resolved = resolve_seed(seed);
            if (!resolved) return kExitRejected;
            Owned summary;
            mdhc_status status =
                mdhc_params_generate(dir.c_str(), profile.c_str(), bits, dims, resolved->c_str(), &summary.text);
            std::cout << summary.str();
            return report(status);
        }
        if (scenario->parsed()) {
            std::string script = read_input(script_path);
            Owned text;
            mdhc_status status = mdhc_scenario_run(script.c_str(), &text.text);
            std::cout << text.str();
            return report(status);
        }
        if (bench->parsed()) {
            auto resolved = resolve_seed(seed);
            if (!resolved) return kExitRejected;
            Owned table;
            mdhc_status status = mdhc_bench(shape.c_str(), n, m, strategy.c_str(), t, requests.c_str(),
                                            profile.c_str(), resolved->c_str(), &table.text);
            std::cout << table.str();
            return report(status);
        }

        WorkspaceHandle ws;
        if (mdhc_status status = mdhc_workspace_open(dir.c_str(), &ws.ws); status != MDHC_OK) {
            return report(status);
        }
        if (mint->parsed()) {
            auto resolved = resolve_seed(seed);
            if (!resolved) return kExitRejected;
            Owned summary;
            mdhc_status status = mdhc_mint(ws.ws, scheme.c_str(), length, resolved->c_str(), customer.c_str(),
                                           vendor.empty() ? nullptr : vendor.c_str(), &summary.text);
            std::cout << summary.str();
            return report(status);
        }
        if (pay->parsed()) {
            Owned payment;
            mdhc_status status = mdhc_pay(ws.ws, customer.c_str(), vendor.c_str(), &payment.text);
            if (status == MDHC_OK) {
                if (out_path.empty()) {
                    std::cout << payment.str();
                } else {
                    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
                    out << payment.str();
                    if (!out) {
                        std::cerr << "error: cannot write " << out_path << "\n";
                        return kExitRejected;
                    }
                }
            }
            return report(status);
        }
        if (verify->parsed()) {
            std::string payment = read_input(payment_path);
            Owned outcome;
            mdhc_status status = mdhc_verify(ws.ws, vendor.c_str(), payment.c_str(), &outcome.text);
            if (outcome.text) std::cout << outcome.str() << "\n";
            return report(status);
        }
        if (redeem->parsed()) {
            Owned summary;
            std::uint64_t credited = 0;
            mdhc_status status = mdhc_redeem(ws.ws, vendor.c_str(), &credited, &summary.text);
            std::cout << summary.str();
            return report(status);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
