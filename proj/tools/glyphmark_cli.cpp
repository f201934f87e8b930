#include "glyphmark/glyphmark.hpp"
int main() { return 0; }
