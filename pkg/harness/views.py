from django_filters.rest_framework import DjangoFilterBackend
from rest_framework import generics, permissions
from rest_framework.filters import OrderingFilter, SearchFilter

from .models import ExperimentRun
from .serializers import ExperimentRunDetailSerializer, ExperimentRunListSerializer


class ExperimentRunListView(generics.ListAPIView):
    permission_classes = [permissions.AllowAny]
    serializer_class = ExperimentRunListSerializer
    queryset = ExperimentRun.objects.all()
    filter_backends = [DjangoFilterBackend, SearchFilter, OrderingFilter]
    filterset_fields = ['kind', 'passed']
    search_fields = ['kind', 'output_dir']
    ordering_fields = ['created_at', 'seed', 'failed_count']
    ordering = ['-created_at', '-id']


class ExperimentRunDetailView(generics.RetrieveAPIView):
    permission_classes = [permissions.AllowAny]
    serializer_class = ExperimentRunDetailSerializer
    queryset = ExperimentRun.objects.prefetch_related('checks')
