// Exits 77 (reported as skipped) when the email-Eu-core file is not available.
#include <iostream>

#include "real_data.hpp"

int main() {
  const auto path = acceptance::ee_path();
  if (!path || !std::filesystem::exists(*path)) {
    std::cout << "[SKIP] criterion 10: email-Eu-core.txt not found (set CTRLROB_EE_PATH or put it in data/)\n";
    return 77;
  }
  try {
    const auto r = acceptance::check_ee(*path);
    std::cout << (r.passed ? "[PASS]" : "[FAIL]") << " criterion 10: " << r.detail << "\n";
    return r.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << "[FAIL] criterion 10: " << e.what() << "\n";
    return 1;
  }
}
