// Regenerates the data corpus, golden outputs, and the checksum manifest.
// Usage: gen_corpus <repo-root>

#include <fstream>
#include <iostream>

#include "corpus_cases.hpp"

int main(int argc, char** argv) {
    const std::string root = argc > 1 ? argv[1] : ".";
    std::ofstream manifest(root + "/data/MANIFEST.csv");
    if (!manifest) {
        std::cerr << "cannot write manifest under " << root << "/data\n";
        return 1;
    }
    manifest << "file,fnv1a64,bytes\n";
    for (const auto& f : corpus::all_files()) {
        const std::string body = f.content();
        std::ofstream out(root + "/" + f.path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << f.path << "\n";
            return 1;
        }
        out << body;
        manifest << f.path << ',' << corpus::hex64(corpus::fnv1a64(body)) << ',' << body.size()
                 << "\n";
        std::cout << "wrote " << f.path << " (" << body.size() << " bytes)\n";
    }
    return 0;
}
