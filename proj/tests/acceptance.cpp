// Acceptance suite: one line per criterion, JSON report next to the binary.

#include <fstream>
#include <iostream>

#include "epz/verify.hpp"

int main(int argc, char** argv)
{
    epz::RunConfig cfg;
    std::vector<std::string> only;
    for (int i = 1; i < argc; ++i) only.emplace_back(argv[i]);
    try {
        const epz::VerifyReport rep = epz::run_verify(cfg, only, [](const epz::CheckResult& r) {
            std::cout << epz::summary_line(r) << std::endl;
        });
        std::ofstream("acceptance_report.json") << rep.to_json().dump(2) << "\n";
        int pass = 0;
        for (const auto& r : rep.results) pass += r.passed;
        std::cout << pass << "/" << rep.results.size() << " criteria passed" << std::endl;
        return rep.all_passed() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
}
