#ifndef QPFORMS_FORM_IO_HPP
#define QPFORMS_FORM_IO_HPP

#include <iosfwd>
#include <string>

#include "qpforms/form.hpp"

namespace qpforms {

/// Text format for forms.  First non-comment line is the header
///
///     p=<prime> n=<vars> d=<degree> [prec=<digits>]
///
/// (keys in any order) followed by one term per line:
///
///     <coeff-token> <e_1> ... <e_n>
///
/// where coeff-token is a plain integer, `v:u:k` (value p^v*u known to k
/// digits) or `z:m` (zero to precision m).  `#` starts a comment; blank
/// lines are ignored.  Exponents of each term must sum to the degree.
Form read_form(std::istream& in);
Form read_form_file(const std::string& path);
Form parse_form(const std::string& text);

void write_form(std::ostream& out, const Form& f);
std::string form_to_string(const Form& f);

} // namespace qpforms

#endif
