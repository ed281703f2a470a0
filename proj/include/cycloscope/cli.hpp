#ifndef CYCLOSCOPE_CLI_HPP
#define CYCLOSCOPE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cycloscope {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int usage = 2;
inline constexpr int capacity = 3;
inline constexpr int internal = 4;
}  // namespace exit_code

// args excludes the program name. Reports go to out, diagnostics and
// progress to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cycloscope

#endif
