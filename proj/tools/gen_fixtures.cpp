// Regenerates fixtures/*.quad from the built-in models. Run from the
// repository root after changing the models or the file format:
//
//   ./build/tools/gen_fixtures [out-dir]

#include <iostream>
#include <string>

#include "quadrose/cli.hpp"
#include "quadrose/models.hpp"

int main(int argc, char** argv) {
  using namespace quadrose;
  const std::string dir = argc > 1 ? argv[1] : "fixtures";
  int bad = 0;
  auto put = [&](const std::string& name, const Quadruple& q) {
    const std::string path = dir + "/" + name + ".quad";
    Report err;
    if (write_quad(q, path, &err)) {
      std::cout << path << "\n";
    } else {
      std::cerr << path << ": " << err.str();
      bad = 1;
    }
  };
  for (int d = 2; d <= 5; ++d) put("cycle" + std::to_string(d), models::cycle(d));
  put("exp", models::exp_chain());
  put("cosine", models::cosine());
  put("exp_square", models::exp_square());
  return bad;
}
