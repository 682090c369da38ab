// Regenerates the bundled scenario fixtures under scenarios/.
#include <filesystem>
#include <iostream>

#include "extrusim/presets.hpp"

int main(int argc, char** argv) {
    const std::string dir = (argc > 1) ? argv[1] : "scenarios";
    std::filesystem::create_directories(dir);
    using namespace extrusim;
    save_scenario(make_equilibrium_scenario(), dir + "/equilibrium.scn");
    save_scenario(make_perturbed_scenario(0.02), dir + "/perturbed.scn");
    save_scenario(make_h2_scenario(0.02), dir + "/h2class.scn");
    std::cout << "wrote equilibrium.scn, perturbed.scn, h2class.scn to " << dir << "\n";
    return 0;
}
