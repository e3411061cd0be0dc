// Writes every built-in complex to DIR/NAME.json (default data/meshes).

#include "packflow/io.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    namespace fs = std::filesystem;
    using namespace packflow;
    const fs::path dir = argc > 1 ? argv[1] : "data/meshes";
    fs::create_directories(dir);
    for (const auto& name : meshes::surface_names())
        io::write_text((dir / (name + ".json")).string(), io::mesh_to_json(meshes::surface(name)).dump() + "\n");
    for (const auto& name : meshes::manifold_names())
        io::write_text((dir / (name + ".json")).string(), io::mesh_to_json(meshes::manifold(name)).dump() + "\n");
    std::cout << "wrote meshes to " << dir << "\n";
}
