for (o = 0; o < 246; o = o + 1)
{
    s[o] = j6 + 20;
}
