#pragma once

namespace admfreq::cli {

enum Exit { ok = 0, input_error = 2, divergence = 3, bound_failure = 4 };

int main(int argc, char** argv);

}  // namespace admfreq::cli
