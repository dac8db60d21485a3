#include "zq/forms.hpp"
#include "zq/certify.hpp"
#include "zq/builtins.hpp"
int main() { return 0; }
